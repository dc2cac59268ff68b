#include "iwa/modules.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <vector>

#include "linear_algebra_oracle.hpp"
#include "test_support.hpp"

using namespace iwa;
using iwa_test::Rng;
using iwa_test::oracle_coinvariant_rank;

namespace {

SeriesPrecision prec3(int n = 8, int m = 64) { return SeriesPrecision(3, n, m); }

// The worked 5692A1 structure: (Lambda/T)^2 + (Lambda/Phi_3)^2 + Lambda/Phi_9.
ElementaryModule module_5692a1(const SeriesPrecision& prec) {
    IwasawaSeries t = cyclotomic_gamma(3, 0, prec);
    IwasawaSeries phi3 = cyclotomic_gamma(3, 1, prec);
    IwasawaSeries phi9 = cyclotomic_gamma(3, 2, prec);
    return ElementaryModule(prec, {},
                            {{t, 1}, {t, 1}, {phi3, 1}, {phi3, 1}, {phi9, 1}});
}

}  // namespace

TEST(CharElement, Examples) {
    auto prec = prec3();
    EXPECT_EQ(char_element(ElementaryModule(prec, {}, {})), IwasawaSeries::one(prec));

    IwasawaSeries ch = char_element(module_5692a1(prec));
    EXPECT_EQ(ch.degree(), 12);
    EXPECT_TRUE(is_distinguished(ch));
    IwasawaSeries expected = pow(cyclotomic_gamma(3, 0, prec), 2) *
                             pow(cyclotomic_gamma(3, 1, prec), 2) *
                             cyclotomic_gamma(3, 2, prec);
    EXPECT_EQ(ch, expected);

    EXPECT_EQ(char_element(ElementaryModule(prec, {2}, {})),
              IwasawaSeries::constant(prec, 9));
}

TEST(CharElement, RejectsBadFactors) {
    auto prec = prec3();
    EXPECT_THROW(ElementaryModule(prec, {}, {{IwasawaSeries::one(prec), 1}}),
                 InvalidInput);
    EXPECT_THROW(ElementaryModule(prec, {}, {{IwasawaSeries(prec, {mpz_class(1), mpz_class(1)}), 1}}),
                 InvalidInput);  // 1 + T is not distinguished
    EXPECT_THROW(ElementaryModule(prec, {0}, {}), InvalidInput);
}

TEST(CharElement, BudgetErrors) {
    SeriesPrecision tight(3, 3, 8);
    EXPECT_THROW(char_element(ElementaryModule(tight, {3}, {})), InsufficientPrecision);
    IwasawaSeries phi9 = cyclotomic_gamma(3, 2, tight);
    EXPECT_THROW(char_element(ElementaryModule(tight, {}, {{phi9, 2}})), DegreeCapExceeded);
}

TEST(ModuleMuLambda, Examples) {
    auto prec = prec3();
    EXPECT_EQ(module_mu_lambda(module_5692a1(prec)), (std::pair<long, long>{0, 12}));
    EXPECT_EQ(module_mu_lambda(ElementaryModule(prec, {1, 1}, {})),
              (std::pair<long, long>{2, 0}));
    ElementaryModule phi3sq(prec, {}, {{cyclotomic_gamma(3, 1, prec), 2}});
    EXPECT_EQ(module_mu_lambda(phi3sq), (std::pair<long, long>{0, 4}));
}

TEST(CoinvariantRank, Examples) {
    auto prec = prec3();
    ElementaryModule m = module_5692a1(prec);
    EXPECT_EQ(coinvariant_rank(m, 0), 2);
    EXPECT_EQ(coinvariant_rank(m, 1), 6);
    EXPECT_EQ(coinvariant_rank(m, 2), 12);
    EXPECT_EQ(coinvariant_rank(m, 3), 12);

    ElementaryModule phi9(prec, {}, {{cyclotomic_gamma(3, 2, prec), 1}});
    EXPECT_EQ(coinvariant_rank(phi9, 1), 0);

    ElementaryModule ppart(prec3(7, 64), {5}, {});
    for (int n = 0; n <= 3; ++n) EXPECT_EQ(coinvariant_rank(ppart, n), 0);
}

TEST(CoinvariantRank, NonDecreasingAndBoundedByLambda) {
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        long p = rng.coin() ? 3 : 5;
        SeriesPrecision prec(p, 8, 64);
        std::vector<PolyFactor> poly;
        int budget = 10;
        while (budget > 0 && rng.coin(0.8)) {
            int choice = static_cast<int>(rng.uniform(0, 2));
            IwasawaSeries f = choice < 2 ? cyclotomic_gamma(p, choice, prec)
                                         : rng.random_distinguished(prec, 3);
            int beta = static_cast<int>(rng.uniform(1, 2));
            if (f.degree() * beta > budget) break;
            budget -= f.degree() * beta;
            poly.push_back({f, beta});
        }
        ElementaryModule m(prec, {}, poly);
        long lambda = module_mu_lambda(m).second;
        long prev = 0;
        for (int n = 0; n <= 2; ++n) {
            long r = coinvariant_rank(m, n);
            EXPECT_GE(r, prev);
            EXPECT_LE(r, lambda);
            prev = r;
        }
    }
}

// Formula vs the independent companion-matrix/Smith-form rank.
TEST(CoinvariantRank, LinearAlgebraOracle) {
    Rng rng(32);
    for (long p : {3L, 5L}) {
        SeriesPrecision prec(p, 30, 64);
        std::vector<IwasawaSeries> cases;
        cases.push_back(cyclotomic_gamma(p, 0, prec));
        cases.push_back(cyclotomic_gamma(p, 1, prec));
        cases.push_back(cyclotomic_gamma(p, 0, prec) * cyclotomic_gamma(p, 1, prec));
        if (p == 3) {
            cases.push_back(cyclotomic_gamma(p, 2, prec));
            cases.push_back(cyclotomic_gamma(p, 1, prec) * cyclotomic_gamma(p, 2, prec));
        }
        for (int i = 0; i < 12; ++i) {
            cases.push_back(rng.random_distinguished(prec, static_cast<int>(rng.uniform(1, 12))));
        }
        // Mixed products of a cyclotomic factor and a random distinguished part.
        for (int i = 0; i < 4; ++i) {
            cases.push_back(cyclotomic_gamma(p, static_cast<int>(rng.uniform(0, 1)), prec) *
                            rng.random_distinguished(prec, static_cast<int>(rng.uniform(1, 5))));
        }
        for (const auto& f : cases) {
            for (int n = 0; n <= 2; ++n) {
                ElementaryModule m(prec, {}, {{f, 1}});
                EXPECT_EQ(coinvariant_rank(m, n), oracle_coinvariant_rank(f, n))
                    << "p=" << p << " n=" << n;
            }
        }
    }
}

TEST(CorankSequence, RejectsDecreasing) {
    EXPECT_THROW(CorankSequence(3, {2, 1}), InvalidInput);
    EXPECT_THROW(CorankSequence(3, {-1}), InvalidInput);
    EXPECT_NO_THROW(CorankSequence(3, {2, 6, 12, 12}));
}

TEST(SemisimpleCriterion, Examples) {
    SemisimpleDecision d = semisimple_criterion(12, CorankSequence(3, {2, 6, 12, 12}));
    EXPECT_TRUE(d.semisimple);
    EXPECT_EQ(d.witness_level, 2);

    SemisimpleDecision e = semisimple_criterion(5, CorankSequence(3, {2, 3}));
    EXPECT_FALSE(e.semisimple);

    EXPECT_THROW(semisimple_criterion(3, CorankSequence(3, {4})), InvalidInput);
}

TEST(DeduceStructure, WorkedExample) {
    StructureDeduction d = deduce_structure(3, CorankSequence(3, {2, 6, 12}), 12);
    EXPECT_EQ(d.multiplicities, (std::vector<long>{2, 2, 1}));
    EXPECT_EQ(d.residual_lambda, 0);
}

TEST(DeduceStructure, ZeroModule) {
    StructureDeduction d = deduce_structure(3, CorankSequence(3, {0}), 0);
    EXPECT_EQ(d.multiplicities, (std::vector<long>{0}));
    EXPECT_EQ(d.residual_lambda, 0);
}

TEST(DeduceStructure, ArithmeticObstructions) {
    EXPECT_THROW(deduce_structure(3, CorankSequence(3, {1, 2}), 2), NotDivisible);
    EXPECT_THROW(deduce_structure(3, CorankSequence(3, {2, 6}), 3), NegativeResidual);
}

TEST(DeduceStructure, ResidualReported) {
    // lambda exceeds what the cyclotomic factors explain.
    StructureDeduction d = deduce_structure(3, CorankSequence(3, {1, 3}), 7);
    EXPECT_EQ(d.multiplicities, (std::vector<long>{1, 1}));
    EXPECT_EQ(d.residual_lambda, 4);
}

TEST(DeduceStructure, RoundTripThroughCoinvariants) {
    for (long p : {3L, 5L}) {
        SeriesPrecision prec(p, 8, 64);
        std::vector<std::vector<long>> seqs;
        if (p == 3) {
            seqs = {{2, 6, 12}, {0}, {1, 3}, {0, 2, 2}, {3, 3}};
        } else {
            seqs = {{1, 5}, {0, 4}, {2, 2}};
        }
        for (const auto& ranks : seqs) {
            CorankSequence seq(p, ranks);
            long lambda = ranks.back();
            StructureDeduction d = deduce_structure(p, seq, lambda);
            ElementaryModule m = deduced_module(p, d, prec);
            for (size_t n = 0; n < ranks.size(); ++n) {
                EXPECT_EQ(coinvariant_rank(m, static_cast<int>(n)), ranks[n]);
            }
            auto [mu, lam] = module_mu_lambda(m);
            EXPECT_EQ(mu, 0);
            EXPECT_EQ(lam, lambda - d.residual_lambda);
        }
    }
}

TEST(CharElement, MultiplicativeOverDirectSum) {
    Rng rng(33);
    auto prec = prec3(10, 64);
    for (int trial = 0; trial < 30; ++trial) {
        ElementaryModule a(prec, {static_cast<int>(rng.uniform(1, 2))},
                           {{rng.random_distinguished(prec, 2), 1}});
        ElementaryModule b(prec, {},
                           {{rng.random_distinguished(prec, 3), 2},
                            {cyclotomic_gamma(3, 1, prec), 1}});
        EXPECT_EQ(char_element(direct_sum(a, b)), char_element(a) * char_element(b));
    }
}

// Brute-force check of the criterion's logic: whenever the criterion
// fires on (lambda, ranks), every elementary module producing those data
// has multiplicity one on all factors dividing some omega_n.
TEST(SemisimpleCriterion, BruteForceEnumeration) {
    struct Atom {
        int kind;    // 0 = T, 1 = Phi_3, 2 = Phi_9, 3..4 = omega-coprime fillers
        int degree;
        int beta;
    };
    std::vector<Atom> atoms;
    for (int beta = 1; beta <= 8; ++beta) {
        atoms.push_back({0, 1, beta});
        if (2 * beta <= 8) atoms.push_back({1, 2, beta});
        if (6 * beta <= 8) atoms.push_back({2, 6, beta});
        atoms.push_back({3, 1, beta});
        if (2 * beta <= 8) atoms.push_back({4, 2, beta});
    }
    long checked = 0;
    // DFS over multisets of atoms with total beta*degree <= 8.
    std::vector<Atom> chosen;
    auto rank_at = [&](int n) {
        long r = 0;
        for (const Atom& a : chosen) {
            if (a.kind == 0) r += 1;
            if (a.kind == 1 && n >= 1) r += 2;
            if (a.kind == 2 && n >= 2) r += 6;
        }
        return r;
    };
    std::function<void(size_t, int)> dfs = [&](size_t start, int budget) {
        long lambda = 0;
        for (const Atom& a : chosen) lambda += static_cast<long>(a.beta) * a.degree;
        std::vector<long> ranks = {rank_at(0), rank_at(1), rank_at(2)};
        SemisimpleDecision d = semisimple_criterion(lambda, CorankSequence(3, ranks));
        if (d.semisimple) {
            for (const Atom& a : chosen) {
                if (a.kind <= 2) {
                    ASSERT_EQ(a.beta, 1)
                        << "criterion fired on a module with a repeated omega-factor";
                }
            }
        }
        ++checked;
        for (size_t i = start; i < atoms.size(); ++i) {
            int w = atoms[i].beta * atoms[i].degree;
            if (w > budget) continue;
            chosen.push_back(atoms[i]);
            dfs(i, budget - w);
            chosen.pop_back();
        }
    };
    dfs(0, 8);
    EXPECT_GT(checked, 1000);
}
