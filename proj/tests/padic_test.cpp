#include "iwa/padic.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace iwa;

TEST(PadicInt, ConstructionNormalizes) {
    PadicInt a(3, 4, 84);
    EXPECT_EQ(a.residue(), 84 % 81);
    PadicInt b(3, 4, -1);
    EXPECT_EQ(b.residue(), 80);
    EXPECT_THROW(PadicInt(4, 2, 1), InvalidInput);
    EXPECT_THROW(PadicInt(2, 2, 1), InvalidInput);
    EXPECT_THROW(PadicInt(9, 2, 1), InvalidInput);
    EXPECT_THROW(PadicInt(3, 0, 1), InvalidInput);
}

TEST(PadicInt, AddExamples) {
    PadicInt a(3, 4, 5), b(3, 4, 79);
    EXPECT_EQ((a + b).residue(), 3);  // 84 mod 81
    EXPECT_EQ((a + b).precision(), 4);

    // Precision drops to the min of the operands.
    PadicInt c(5, 3, 124), d(5, 2, 1);
    PadicInt e = c + d;
    EXPECT_EQ(e.precision(), 2);
    EXPECT_EQ(e.residue(), 0);  // 125 = 0 mod 25
}

TEST(PadicInt, MulExamples) {
    PadicInt zero(3, 4, 0), c(3, 4, 77);
    EXPECT_EQ((zero * c).residue(), 0);
    PadicInt a(3, 2, 2), b(3, 2, 5);
    EXPECT_EQ((a * b).residue(), 1);  // 10 mod 9
}

TEST(PadicInt, PrimeMismatchRejected) {
    PadicInt a(3, 4, 1), b(5, 4, 1);
    EXPECT_THROW(a + b, PrimeMismatch);
    EXPECT_THROW(a * b, PrimeMismatch);
    EXPECT_THROW(a - b, PrimeMismatch);
}

TEST(Valuation, Examples) {
    EXPECT_EQ(valuation(PadicInt(3, 4, 18)).value, 2);
    EXPECT_FALSE(valuation(PadicInt(3, 4, 18)).is_lower_bound);
    EXPECT_EQ(valuation(PadicInt(3, 4, 1)).value, 0);
    PadicValuation v = valuation(PadicInt(3, 4, 0));
    EXPECT_EQ(v.value, 4);
    EXPECT_TRUE(v.is_lower_bound);
}

TEST(Valuation, AdditiveUnderMultiplication) {
    iwa_test::Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        long p = rng.coin() ? 3 : 5;
        int n = 8;
        PadicInt a(p, n, rng.below(p_power(p, n)));
        PadicInt b(p, n, rng.below(p_power(p, n)));
        PadicInt c = a * b;
        PadicValuation va = valuation(a), vb = valuation(b), vc = valuation(c);
        if (va.is_lower_bound || vb.is_lower_bound) continue;
        if (va.value + vb.value < n) {
            EXPECT_FALSE(vc.is_lower_bound);
            EXPECT_EQ(vc.value, va.value + vb.value);
        }
    }
}

TEST(InvertUnit, Examples) {
    EXPECT_EQ(invert_unit(PadicInt(3, 4, 1)).residue(), 1);
    EXPECT_EQ(invert_unit(PadicInt(3, 2, 2)).residue(), 5);
    EXPECT_THROW(invert_unit(PadicInt(3, 4, 3)), NotAUnit);
    EXPECT_THROW(invert_unit(PadicInt(3, 4, 0)), NotAUnit);
}

TEST(InvertUnit, Involution) {
    iwa_test::Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        long p = rng.coin() ? 3 : 7;
        int n = rng.uniform(1, 10);
        PadicInt a(p, static_cast<int>(n), rng.unit_below(p_power(p, n), p));
        EXPECT_EQ(invert_unit(invert_unit(a)), a);
        EXPECT_EQ((a * invert_unit(a)).residue(), 1);
    }
}

TEST(PadicBinomial, Examples) {
    EXPECT_EQ(padic_binomial(PadicInt(3, 4, 55), 0).residue(), 1);
    EXPECT_EQ(padic_binomial(PadicInt(3, 4, 2), 2).residue(), 1);
    EXPECT_EQ(padic_binomial(PadicInt(3, 3, 4), 2).residue(), 6);
}

// For a nonnegative integer lift, the result is the exact integer
// binomial reduced mod p^N.
TEST(PadicBinomial, IntegerOracle) {
    iwa_test::Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        long p = rng.coin() ? 3 : 5;
        int n = rng.uniform(1, 8);
        long u = rng.uniform(0, 600);
        unsigned long k = static_cast<unsigned long>(rng.uniform(0, 25));
        mpz_class exact;
        mpz_bin_uiui(exact.get_mpz_t(), static_cast<unsigned long>(u), k);
        mpz_class mod = p_power(p, n);
        // A lift congruent to u mod p^{N + v_p(k!)} must reproduce the
        // exact binomial mod p^N.
        long guard = 0;
        for (long q = p; q <= static_cast<long>(k); q *= p) guard += static_cast<long>(k) / q;
        PadicInt uu(p, static_cast<int>(n + guard), u);
        mpz_class got = padic_binomial(uu, k).residue() % mod;
        EXPECT_EQ(got, exact % mod) << "p=" << p << " u=" << u << " k=" << k;
    }
}

// Pascal's rule at working precision.  The canonical lifts of u and u-1
// differ by exactly 1 whenever u != 0, which makes the integer identity
// exact; u = 0 wraps around and is certified only up to the k! guard.
TEST(PadicBinomial, PascalRule) {
    iwa_test::Rng rng(14);
    for (int trial = 0; trial < 300; ++trial) {
        long p = rng.coin() ? 3 : 5;
        int n = rng.uniform(2, 10);
        mpz_class u = rng.below(p_power(p, n) - 1) + 1;
        unsigned long k = static_cast<unsigned long>(rng.uniform(1, 30));
        PadicInt uu(p, n, u);
        PadicInt um1(p, n, u - 1);
        PadicInt lhs = padic_binomial(uu, k);
        PadicInt rhs = padic_binomial(um1, k) + padic_binomial(um1, k - 1);
        EXPECT_EQ(lhs, rhs) << "p=" << p << " N=" << n << " u=" << u << " k=" << k;
    }
}

TEST(PadicPow, MatchesRepeatedProduct) {
    PadicInt a(3, 6, 10);
    PadicInt acc(3, 6, 1);
    for (unsigned long e = 0; e < 7; ++e) {
        EXPECT_EQ(pow(a, e), acc);
        acc = acc * a;
    }
}
