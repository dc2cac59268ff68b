#pragma once

#include <gmpxx.h>

#include <utility>

#include "iwa/errors.hpp"

namespace iwa {

inline bool is_odd_prime(long p) {
    if (p < 3 || p % 2 == 0) return false;
    for (long d = 3; d * d <= p; d += 2) {
        if (p % d == 0) return false;
    }
    return true;
}

inline mpz_class p_power(long p, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(e));
    return r;
}

// v_p of a nonzero integer.
inline long int_valuation(const mpz_class& x, long p) {
    mpz_class rest;
    return static_cast<long>(
        mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), mpz_class(p).get_mpz_t()));
}

struct PadicValuation {
    long value = 0;
    // When the residue is zero mod p^N the true valuation is only known to
    // be >= N; finite precision cannot certify vanishing.
    bool is_lower_bound = false;

    bool operator==(const PadicValuation&) const = default;
};

// An element of Zp known modulo p^N.  Immutable; all operations are pure.
class PadicInt {
  public:
    PadicInt(long p, int precision, mpz_class value)
        : p_(p), precision_(precision) {
        if (!is_odd_prime(p)) {
            throw InvalidInput("p must be an odd prime, got " + std::to_string(p));
        }
        if (precision < 1) {
            throw InvalidInput("precision must be >= 1");
        }
        modulus_ = p_power(p, precision);
        residue_ = std::move(value);
        mpz_mod(residue_.get_mpz_t(), residue_.get_mpz_t(), modulus_.get_mpz_t());
    }

    long prime() const { return p_; }
    int precision() const { return precision_; }
    const mpz_class& residue() const { return residue_; }
    const mpz_class& modulus() const { return modulus_; }
    bool is_zero() const { return residue_ == 0; }

    bool operator==(const PadicInt& other) const {
        return p_ == other.p_ && precision_ == other.precision_ &&
               residue_ == other.residue_;
    }

  private:
    long p_;
    int precision_;
    mpz_class modulus_;
    mpz_class residue_;
};

namespace detail {
inline void require_same_prime(const PadicInt& a, const PadicInt& b) {
    if (a.prime() != b.prime()) {
        throw PrimeMismatch("operands live over p=" + std::to_string(a.prime()) +
                            " and p=" + std::to_string(b.prime()));
    }
}
}  // namespace detail

inline PadicInt reduce_precision(const PadicInt& a, int precision) {
    if (precision > a.precision()) {
        throw InsufficientPrecision("cannot raise precision of a p-adic value");
    }
    return PadicInt(a.prime(), precision, a.residue());
}

inline PadicInt operator+(const PadicInt& a, const PadicInt& b) {
    detail::require_same_prime(a, b);
    int n = std::min(a.precision(), b.precision());
    return PadicInt(a.prime(), n, a.residue() + b.residue());
}

inline PadicInt operator-(const PadicInt& a, const PadicInt& b) {
    detail::require_same_prime(a, b);
    int n = std::min(a.precision(), b.precision());
    return PadicInt(a.prime(), n, a.residue() - b.residue());
}

inline PadicInt operator*(const PadicInt& a, const PadicInt& b) {
    detail::require_same_prime(a, b);
    int n = std::min(a.precision(), b.precision());
    return PadicInt(a.prime(), n, a.residue() * b.residue());
}

// Equality at the coarser of the two precisions.
inline bool congruent(const PadicInt& a, const PadicInt& b) {
    detail::require_same_prime(a, b);
    int n = std::min(a.precision(), b.precision());
    return reduce_precision(a, n).residue() == reduce_precision(b, n).residue();
}

// Largest k < N with p^k | residue; a lower bound N when the residue is 0.
inline PadicValuation valuation(const PadicInt& a) {
    if (a.is_zero()) {
        return PadicValuation{a.precision(), true};
    }
    return PadicValuation{int_valuation(a.residue(), a.prime()), false};
}

inline bool is_unit(const PadicInt& a) {
    return a.residue() % a.prime() != 0;
}

inline PadicInt invert_unit(const PadicInt& a) {
    if (!is_unit(a)) {
        throw NotAUnit("cannot invert: residue divisible by p");
    }
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), a.residue().get_mpz_t(), a.modulus().get_mpz_t());
    return PadicInt(a.prime(), a.precision(), inv);
}

inline PadicInt pow(const PadicInt& a, unsigned long e) {
    mpz_class r;
    mpz_powm_ui(r.get_mpz_t(), a.residue().get_mpz_t(), e, a.modulus().get_mpz_t());
    return PadicInt(a.prime(), a.precision(), r);
}

// C(u,k) = u(u-1)...(u-k+1)/k! as an element of Zp mod p^N.  The stored
// residue is used as an exact integer lift, the binomial is evaluated
// exactly over Z (so division by k! never leaves the integers) and only
// then reduced.
inline PadicInt padic_binomial(const PadicInt& u, unsigned long k) {
    mpz_class b;
    mpz_bin_ui(b.get_mpz_t(), u.residue().get_mpz_t(), k);
    return PadicInt(u.prime(), u.precision(), b);
}

}  // namespace iwa
