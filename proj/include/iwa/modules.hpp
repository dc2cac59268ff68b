#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwa/errors.hpp"
#include "iwa/series.hpp"

namespace iwa {

// One polynomial factor Lambda/f^beta of an elementary module.
struct PolyFactor {
    IwasawaSeries f;
    int beta = 1;
};

// Structure data of a finitely generated torsion Lambda-module, up to
// pseudo-isomorphism: p-power factors Lambda/p^{a_i} and polynomial
// factors Lambda/f_j^{beta_j} with f_j distinguished.
class ElementaryModule {
  public:
    ElementaryModule(SeriesPrecision prec, std::vector<int> p_part,
                     std::vector<PolyFactor> poly_part)
        : prec_(std::move(prec)), p_part_(std::move(p_part)),
          poly_part_(std::move(poly_part)) {
        for (int a : p_part_) {
            if (a < 1) throw InvalidInput("p-part exponents must be >= 1");
        }
        for (const auto& fac : poly_part_) {
            if (fac.beta < 1) throw InvalidInput("factor multiplicities must be >= 1");
            if (!is_distinguished(fac.f)) {
                throw InvalidInput("polynomial factors must be distinguished");
            }
            if (fac.f.degree() == 0) {
                throw InvalidInput("the constant 1 is not a module factor");
            }
            if (fac.f.precision().prime() != prec_.prime()) {
                throw PrimeMismatch("factor lives over a different prime");
            }
        }
    }

    const SeriesPrecision& precision() const { return prec_; }
    const std::vector<int>& p_part() const { return p_part_; }
    const std::vector<PolyFactor>& poly_part() const { return poly_part_; }

  private:
    SeriesPrecision prec_;
    std::vector<int> p_part_;
    std::vector<PolyFactor> poly_part_;
};

inline ElementaryModule direct_sum(const ElementaryModule& a, const ElementaryModule& b) {
    SeriesPrecision prec = SeriesPrecision::join(a.precision(), b.precision());
    std::vector<int> p_part = a.p_part();
    p_part.insert(p_part.end(), b.p_part().begin(), b.p_part().end());
    std::vector<PolyFactor> poly = a.poly_part();
    poly.insert(poly.end(), b.poly_part().begin(), b.poly_part().end());
    return ElementaryModule(prec, std::move(p_part), std::move(poly));
}

// mu = sum a_i, lambda = sum beta_j deg f_j.
inline std::pair<long, long> module_mu_lambda(const ElementaryModule& mod) {
    long mu = 0;
    for (int a : mod.p_part()) mu += a;
    long lambda = 0;
    for (const auto& fac : mod.poly_part()) {
        lambda += static_cast<long>(fac.beta) * fac.f.degree();
    }
    if (mu >= mod.precision().coeff_precision()) {
        throw InsufficientPrecision("total p-power exponent " + std::to_string(mu) +
                                    " does not fit below precision N");
    }
    if (lambda >= mod.precision().degree_cap()) {
        throw DegreeCapExceeded("total polynomial degree " + std::to_string(lambda) +
                                " does not fit below the degree cap");
    }
    return {mu, lambda};
}

// Characteristic element: prod p^{a_i} * prod f_j^{beta_j}.
inline IwasawaSeries char_element(const ElementaryModule& mod) {
    auto [mu, lambda] = module_mu_lambda(mod);
    (void)lambda;
    IwasawaSeries out = IwasawaSeries::constant(mod.precision(),
                                                p_power(mod.precision().prime(), mu));
    for (const auto& fac : mod.poly_part()) {
        out = out * pow(at_precision(fac.f, SeriesPrecision::join(mod.precision(),
                                                                  fac.f.precision())),
                        static_cast<unsigned long>(fac.beta));
    }
    return out;
}

namespace detail {

// Does the distinguished polynomial g divide f at working precision?
inline bool divides_poly(const Coeffs& f, const Coeffs& g, const mpz_class& mod) {
    if (poly_degree(g) > poly_degree(f)) return false;
    auto [q, r] = poly_divmod_monic(f, g, mod);
    (void)q;
    return poly_degree(r) < 0;
}

}  // namespace detail

// deg gcd(f, omega_n).  omega_n is squarefree with known irreducible
// factors Phi_{p^i} (i <= n), so the gcd is the product of those that
// divide f; multiplicities beta never contribute.
inline long deg_gcd_with_omega(const IwasawaSeries& f, int n) {
    const SeriesPrecision& prec = f.precision();
    long p = prec.prime();
    double approx = std::pow(static_cast<double>(p), n);
    if (approx >= static_cast<double>(prec.degree_cap())) {
        throw DegreeCapExceeded("omega_" + std::to_string(n) + " has degree p^n >= M");
    }
    detail::Coeffs fp = f.poly();
    long total = 0;
    for (int i = 0; i <= n; ++i) {
        IwasawaSeries phi = cyclotomic_gamma(p, i, prec);
        if (detail::divides_poly(fp, phi.poly(), prec.modulus())) {
            total += phi.degree();
        }
    }
    return total;
}

// rank_Zp of the Gamma_n-coinvariants: sum over polynomial factors of
// deg gcd(f_j, omega_n); the p-part contributes nothing.
inline long coinvariant_rank(const ElementaryModule& mod, int n) {
    long total = 0;
    for (const auto& fac : mod.poly_part()) {
        total += deg_gcd_with_omega(fac.f, n);
    }
    return total;
}

// Selmer corank data along the cyclotomic tower (non-decreasing).
struct CorankSequence {
    long p;
    std::vector<long> ranks;

    CorankSequence(long p_in, std::vector<long> ranks_in)
        : p(p_in), ranks(std::move(ranks_in)) {
        if (!is_odd_prime(p)) throw InvalidInput("corank sequence needs an odd prime");
        for (size_t i = 0; i + 1 < ranks.size(); ++i) {
            if (ranks[i + 1] < ranks[i]) {
                throw InvalidInput("coinvariant ranks cannot decrease along the tower");
            }
        }
        for (long r : ranks) {
            if (r < 0) throw InvalidInput("coranks are non-negative");
        }
    }
};

// Outcome of the semisimplicity criterion: the criterion is sufficient
// only, so the negative answer is "inconclusive", never "not semisimple".
struct SemisimpleDecision {
    bool semisimple = false;
    int witness_level = -1;  // least n with ranks[n] == lambda when semisimple
};

inline SemisimpleDecision semisimple_criterion(long lambda, const CorankSequence& seq) {
    for (size_t n = 0; n < seq.ranks.size(); ++n) {
        if (seq.ranks[n] > lambda) {
            throw InvalidInput("corank " + std::to_string(seq.ranks[n]) +
                               " exceeds lambda = " + std::to_string(lambda) +
                               "; inconsistent with a torsion module");
        }
        if (seq.ranks[n] == lambda) {
            return SemisimpleDecision{true, static_cast<int>(n)};
        }
    }
    return SemisimpleDecision{false, -1};
}

// Multiplicities of T, Phi_p, ..., Phi_{p^k} deduced from a corank
// sequence, plus the leftover lambda not explained by cyclotomic factors.
struct StructureDeduction {
    std::vector<long> multiplicities;  // a_0 .. a_k
    long residual_lambda = 0;
};

inline long cyclotomic_degree(long p, int i) {
    if (i == 0) return 1;
    long d = p - 1;
    for (int k = 1; k < i; ++k) d *= p;
    return d;
}

// From r_n = a_0 + (p-1)a_1 + ... + p^{n-1}(p-1)a_n, read off the a_n by
// successive differences.  Requires the semisimplicity criterion to have
// succeeded on (lambda, seq); the residual is reported instead of failing
// when the cyclotomic factors do not exhaust lambda.
inline StructureDeduction deduce_structure(long p, const CorankSequence& seq, long lambda) {
    if (p != seq.p) throw PrimeMismatch("sequence prime disagrees");
    if (seq.ranks.empty()) throw InvalidInput("empty corank sequence");
    StructureDeduction out;
    out.multiplicities.push_back(seq.ranks[0]);
    long explained = seq.ranks[0];
    for (size_t n = 1; n < seq.ranks.size(); ++n) {
        long diff = seq.ranks[n] - seq.ranks[n - 1];
        long deg = cyclotomic_degree(p, static_cast<int>(n));
        if (diff % deg != 0) {
            throw NotDivisible("rank jump " + std::to_string(diff) + " at level " +
                               std::to_string(n) + " is not a multiple of deg Phi = " +
                               std::to_string(deg));
        }
        out.multiplicities.push_back(diff / deg);
        explained += diff;
    }
    if (lambda < explained) {
        throw NegativeResidual("lambda = " + std::to_string(lambda) +
                               " is smaller than the cyclotomic degree total " +
                               std::to_string(explained));
    }
    out.residual_lambda = lambda - explained;
    return out;
}

// The elementary module named by a structure deduction: multiplicity a_i
// copies of Lambda/Phi_{p^i}, all with beta = 1.
inline ElementaryModule deduced_module(long p, const StructureDeduction& ded,
                                       const SeriesPrecision& prec) {
    std::vector<PolyFactor> poly;
    for (size_t i = 0; i < ded.multiplicities.size(); ++i) {
        if (ded.multiplicities[i] == 0) continue;
        IwasawaSeries phi = cyclotomic_gamma(p, static_cast<int>(i), prec);
        for (long c = 0; c < ded.multiplicities[i]; ++c) {
            poly.push_back(PolyFactor{phi, 1});
        }
    }
    return ElementaryModule(prec, {}, std::move(poly));
}

}  // namespace iwa
