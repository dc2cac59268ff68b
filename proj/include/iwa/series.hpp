#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwa/errors.hpp"
#include "iwa/padic.hpp"

namespace iwa {

// Finite working model of the Iwasawa algebra Zp[[T]]: coefficients are
// kept mod p^N and series are truncated below T^M.  Every value carries
// its own precision; binary operations require equal p and take the
// componentwise minimum of (N, M).
class SeriesPrecision {
  public:
    SeriesPrecision(long p, int coeff_precision, int degree_cap,
                    int residue_field_degree = 1)
        : p_(p),
          coeff_precision_(coeff_precision),
          degree_cap_(degree_cap),
          residue_field_degree_(residue_field_degree) {
        if (!is_odd_prime(p)) {
            throw InvalidInput("p must be an odd prime, got " + std::to_string(p));
        }
        if (coeff_precision < 1) throw InvalidInput("coefficient precision must be >= 1");
        if (degree_cap < 1) throw InvalidInput("degree cap must be >= 1");
        if (residue_field_degree != 1) {
            // Reserved for coefficient rings larger than Zp; not implemented.
            throw InvalidInput("only residue field degree 1 (Zp coefficients) is supported");
        }
        modulus_ = p_power(p, coeff_precision);
    }

    long prime() const { return p_; }
    int coeff_precision() const { return coeff_precision_; }
    int degree_cap() const { return degree_cap_; }
    int residue_field_degree() const { return residue_field_degree_; }
    const mpz_class& modulus() const { return modulus_; }

    bool operator==(const SeriesPrecision& o) const {
        return p_ == o.p_ && coeff_precision_ == o.coeff_precision_ &&
               degree_cap_ == o.degree_cap_;
    }

    static SeriesPrecision join(const SeriesPrecision& a, const SeriesPrecision& b) {
        if (a.prime() != b.prime()) {
            throw PrimeMismatch("series live over p=" + std::to_string(a.prime()) +
                                " and p=" + std::to_string(b.prime()));
        }
        return SeriesPrecision(a.prime(),
                               std::min(a.coeff_precision(), b.coeff_precision()),
                               std::min(a.degree_cap(), b.degree_cap()));
    }

  private:
    long p_;
    int coeff_precision_;
    int degree_cap_;
    int residue_field_degree_;
    mpz_class modulus_;
};

namespace detail {

// Dense polynomial helpers over Z/p^N.  Index = T-degree; vectors may
// have any length and are not tied to a degree cap.
using Coeffs = std::vector<mpz_class>;

inline void reduce_mod(Coeffs& c, const mpz_class& mod) {
    for (auto& x : c) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
}

inline int poly_degree(const Coeffs& c) {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        if (c[static_cast<size_t>(i)] != 0) return i;
    }
    return -1;
}

inline void trim(Coeffs& c) {
    c.resize(static_cast<size_t>(poly_degree(c) + 1));
}

inline Coeffs poly_add(const Coeffs& a, const Coeffs& b, const mpz_class& mod) {
    Coeffs r(std::max(a.size(), b.size()), mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    reduce_mod(r, mod);
    return r;
}

inline Coeffs poly_sub(const Coeffs& a, const Coeffs& b, const mpz_class& mod) {
    Coeffs r(std::max(a.size(), b.size()), mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    reduce_mod(r, mod);
    return r;
}

// Full product; pass cap = 0 for no truncation, else keep degrees < cap.
inline Coeffs poly_mul(const Coeffs& a, const Coeffs& b, const mpz_class& mod,
                       size_t cap = 0) {
    int da = poly_degree(a), db = poly_degree(b);
    if (da < 0 || db < 0) return {};
    size_t out_len = static_cast<size_t>(da + db) + 1;
    if (cap != 0) out_len = std::min(out_len, cap);
    Coeffs r(out_len, mpz_class(0));
    for (size_t i = 0; i <= static_cast<size_t>(da) && i < out_len; ++i) {
        if (a[i] == 0) continue;
        size_t jmax = std::min(static_cast<size_t>(db), out_len - 1 - i);
        for (size_t j = 0; j <= jmax; ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    reduce_mod(r, mod);
    return r;
}

// Division by a monic polynomial: a = q*m + r with deg r < deg m.
inline std::pair<Coeffs, Coeffs> poly_divmod_monic(const Coeffs& a, const Coeffs& m,
                                                   const mpz_class& mod) {
    int dm = poly_degree(m);
    if (dm < 0 || m[static_cast<size_t>(dm)] != 1) {
        throw InvalidInput("divisor must be monic");
    }
    Coeffs rem = a;
    reduce_mod(rem, mod);
    trim(rem);
    int dr = poly_degree(rem);
    if (dr < dm) return {Coeffs{}, rem};
    Coeffs q(static_cast<size_t>(dr - dm) + 1, mpz_class(0));
    for (int k = dr; k >= dm; --k) {
        mpz_class c = rem[static_cast<size_t>(k)];
        if (c == 0) continue;
        q[static_cast<size_t>(k - dm)] = c;
        for (int j = 0; j <= dm; ++j) {
            rem[static_cast<size_t>(k - dm + j)] -= c * m[static_cast<size_t>(j)];
            mpz_mod(rem[static_cast<size_t>(k - dm + j)].get_mpz_t(),
                    rem[static_cast<size_t>(k - dm + j)].get_mpz_t(), mod.get_mpz_t());
        }
    }
    trim(rem);
    trim(q);
    return {q, rem};
}

// Coefficients of (1+T)^e as exact integers, reduced mod p^N.  The running
// value C(e,k) = C(e,k-1)*(e-k+1)/k stays integral at every step.
inline Coeffs binomial_row(const mpz_class& e, size_t len, const mpz_class& mod) {
    Coeffs row;
    row.reserve(len);
    mpz_class binom = 1;
    for (size_t k = 0; k < len; ++k) {
        if (k > 0) {
            binom *= e - static_cast<long>(k) + 1;
            mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(),
                            static_cast<unsigned long>(k));
            if (binom == 0) {
                row.resize(len, mpz_class(0));
                break;
            }
        }
        row.push_back(binom % mod);
    }
    row.resize(len, mpz_class(0));
    reduce_mod(row, mod);
    return row;
}

}  // namespace detail

// An element of Lambda_{N,M}: f(T) = sum c_i T^i with c_i in [0, p^N),
// i < M.  Immutable after construction.
class IwasawaSeries {
  public:
    explicit IwasawaSeries(const SeriesPrecision& prec)
        : prec_(prec), coeffs_(static_cast<size_t>(prec.degree_cap()), mpz_class(0)) {}

    IwasawaSeries(const SeriesPrecision& prec, detail::Coeffs coeffs)
        : prec_(prec), coeffs_(std::move(coeffs)) {
        coeffs_.resize(static_cast<size_t>(prec.degree_cap()), mpz_class(0));
        detail::reduce_mod(coeffs_, prec.modulus());
    }

    static IwasawaSeries constant(const SeriesPrecision& prec, const mpz_class& c) {
        return IwasawaSeries(prec, detail::Coeffs{c});
    }

    static IwasawaSeries one(const SeriesPrecision& prec) {
        return constant(prec, 1);
    }

    static IwasawaSeries variable(const SeriesPrecision& prec) {
        return monomial(prec, 1, 1);
    }

    static IwasawaSeries monomial(const SeriesPrecision& prec, const mpz_class& c, int k) {
        if (k < 0 || k >= prec.degree_cap()) {
            throw DegreeCapExceeded("monomial degree " + std::to_string(k) +
                                    " does not fit below the degree cap " +
                                    std::to_string(prec.degree_cap()));
        }
        detail::Coeffs v(static_cast<size_t>(k) + 1, mpz_class(0));
        v[static_cast<size_t>(k)] = c;
        return IwasawaSeries(prec, std::move(v));
    }

    const SeriesPrecision& precision() const { return prec_; }
    const detail::Coeffs& coeffs() const { return coeffs_; }
    const mpz_class& coeff(int i) const { return coeffs_.at(static_cast<size_t>(i)); }
    int degree() const { return detail::poly_degree(coeffs_); }
    bool is_zero() const { return degree() < 0; }

    // Polynomial view: coefficients up to the highest nonzero one.
    detail::Coeffs poly() const {
        detail::Coeffs c = coeffs_;
        detail::trim(c);
        return c;
    }

    bool operator==(const IwasawaSeries& o) const {
        return prec_ == o.prec_ && coeffs_ == o.coeffs_;
    }

  private:
    SeriesPrecision prec_;
    detail::Coeffs coeffs_;
};

// Restrict a series to a coarser precision (smaller N and/or M, same p).
inline IwasawaSeries at_precision(const IwasawaSeries& f, const SeriesPrecision& prec) {
    if (prec.prime() != f.precision().prime()) {
        throw PrimeMismatch("cannot move a series to a different prime");
    }
    if (prec.coeff_precision() > f.precision().coeff_precision() ||
        prec.degree_cap() > f.precision().degree_cap()) {
        throw InsufficientPrecision("cannot refine a series beyond its own precision");
    }
    detail::Coeffs c(f.coeffs().begin(),
                     f.coeffs().begin() + prec.degree_cap());
    return IwasawaSeries(prec, std::move(c));
}

inline IwasawaSeries operator+(const IwasawaSeries& f, const IwasawaSeries& g) {
    SeriesPrecision prec = SeriesPrecision::join(f.precision(), g.precision());
    return IwasawaSeries(prec, detail::poly_add(f.coeffs(), g.coeffs(), prec.modulus()));
}

inline IwasawaSeries operator-(const IwasawaSeries& f, const IwasawaSeries& g) {
    SeriesPrecision prec = SeriesPrecision::join(f.precision(), g.precision());
    return IwasawaSeries(prec, detail::poly_sub(f.coeffs(), g.coeffs(), prec.modulus()));
}

inline IwasawaSeries operator-(const IwasawaSeries& f) {
    detail::Coeffs c = f.coeffs();
    for (auto& x : c) x = -x;
    return IwasawaSeries(f.precision(), std::move(c));
}

inline IwasawaSeries operator*(const IwasawaSeries& f, const IwasawaSeries& g) {
    SeriesPrecision prec = SeriesPrecision::join(f.precision(), g.precision());
    return IwasawaSeries(prec,
                         detail::poly_mul(f.coeffs(), g.coeffs(), prec.modulus(),
                                          static_cast<size_t>(prec.degree_cap())));
}

inline IwasawaSeries operator*(const mpz_class& c, const IwasawaSeries& f) {
    detail::Coeffs v = f.coeffs();
    for (auto& x : v) x *= c;
    return IwasawaSeries(f.precision(), std::move(v));
}

// Truncated power by repeated squaring.
inline IwasawaSeries pow(const IwasawaSeries& f, unsigned long e) {
    IwasawaSeries acc = IwasawaSeries::one(f.precision());
    IwasawaSeries base = f;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

// Equality after moving both operands to the joined precision.
inline bool congruent(const IwasawaSeries& f, const IwasawaSeries& g) {
    SeriesPrecision prec = SeriesPrecision::join(f.precision(), g.precision());
    return at_precision(f, prec) == at_precision(g, prec);
}

// Smallest i with c_i nonzero mod p^N; nullopt when the series vanishes at
// working precision (an order >= M cannot be certified).
inline std::optional<int> ord_at_zero(const IwasawaSeries& f) {
    const auto& c = f.coeffs();
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] != 0) return static_cast<int>(i);
    }
    return std::nullopt;
}

// The value of f/T^r at T=0, r = ord_at_zero(f).
inline PadicInt leading_value(const IwasawaSeries& f) {
    auto r = ord_at_zero(f);
    if (!r) {
        throw IndeterminateOrder("series vanishes at working precision");
    }
    return PadicInt(f.precision().prime(), f.precision().coeff_precision(), f.coeff(*r));
}

// f is a unit of Lambda iff its constant term is a unit of Zp.
inline bool is_unit(const IwasawaSeries& f) {
    return f.coeff(0) % f.precision().prime() != 0;
}

// Monic polynomial whose lower coefficients are all divisible by p.
inline bool is_distinguished(const IwasawaSeries& f) {
    int d = f.degree();
    if (d < 0) return false;
    if (f.coeff(d) != 1) return false;
    for (int i = 0; i < d; ++i) {
        if (f.coeff(i) % f.precision().prime() != 0) return false;
    }
    return true;
}

// Inverse of a unit series mod (p^N, T^M), by the usual convolution
// recurrence v_k = -c_0^{-1} sum_{j>=1} c_j v_{k-j}.
inline IwasawaSeries invert_unit_series(const IwasawaSeries& f) {
    if (!is_unit(f)) {
        throw NotAUnit("series has non-unit constant term");
    }
    const SeriesPrecision& prec = f.precision();
    const mpz_class& mod = prec.modulus();
    size_t m = static_cast<size_t>(prec.degree_cap());
    int df = f.degree();
    mpz_class c0inv;
    mpz_invert(c0inv.get_mpz_t(), f.coeff(0).get_mpz_t(), mod.get_mpz_t());
    detail::Coeffs v(m, mpz_class(0));
    v[0] = c0inv;
    for (size_t k = 1; k < m; ++k) {
        mpz_class acc = 0;
        size_t jmax = std::min(k, static_cast<size_t>(df));
        for (size_t j = 1; j <= jmax; ++j) {
            acc += f.coeffs()[j] * v[k - j];
        }
        acc = -acc * c0inv;
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
        v[k] = acc;
    }
    return IwasawaSeries(prec, std::move(v));
}

// Weierstrass factorization data: f = p^mu * unit * distinguished, valid
// mod (p^certified_precision, T^M).
struct WeierstrassData {
    int mu;
    int lambda;
    IwasawaSeries distinguished;
    IwasawaSeries unit;
    int certified_precision;
};

// The (mu, lambda) of the Weierstrass factorization, read off directly:
// mu is the minimal coefficient valuation and lambda the least index
// attaining it.
inline std::pair<int, int> mu_lambda(const IwasawaSeries& f) {
    long p = f.precision().prime();
    int n = f.precision().coeff_precision();
    int mu = n;
    int lambda = -1;
    for (size_t i = 0; i < f.coeffs().size(); ++i) {
        const mpz_class& c = f.coeffs()[i];
        if (c == 0) continue;
        int v = static_cast<int>(int_valuation(c, p));
        if (v < mu) {
            mu = v;
            lambda = static_cast<int>(i);
        }
    }
    if (lambda < 0) {
        throw InsufficientPrecision("series vanishes mod (p^N, T^M); mu/lambda undefined");
    }
    return {mu, lambda};
}

namespace detail {

// Weierstrass division of T^lambda by fp (fp has a unit coefficient at
// index lambda and p-divisible ones below), at precision (mod, m).
// Returns (q, r) with T^lambda = q*fp + r, deg r < lambda, r = 0 mod p.
// Each pass multiplies the residual by an element of (p), so at most
// nc passes are needed for it to vanish mod p^nc.
inline std::pair<Coeffs, Coeffs> weierstrass_divide_monomial(const Coeffs& fp, int lambda,
                                                             const mpz_class& mod, size_t m,
                                                             int nc) {
    Coeffs low(fp.begin(), fp.begin() + lambda);          // coefficients 0..lambda-1
    Coeffs high(fp.begin() + lambda, fp.end());           // unit series
    low.resize(m, mpz_class(0));
    high.resize(m, mpz_class(0));

    mpz_class c0inv;
    mpz_invert(c0inv.get_mpz_t(), high[0].get_mpz_t(), mod.get_mpz_t());
    Coeffs hinv(m, mpz_class(0));
    hinv[0] = c0inv;
    int dh = poly_degree(high);
    for (size_t k = 1; k < m; ++k) {
        mpz_class acc = 0;
        size_t jmax = std::min(k, static_cast<size_t>(dh));
        for (size_t j = 1; j <= jmax; ++j) acc += high[j] * hinv[k - j];
        acc = -acc * c0inv;
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
        hinv[k] = acc;
    }

    Coeffs q(m, mpz_class(0)), r(m, mpz_class(0));
    Coeffs g(m, mpz_class(0));
    g[static_cast<size_t>(lambda)] = 1;
    for (int pass = 0; pass <= nc; ++pass) {
        if (poly_degree(g) < 0) break;
        // Split g = t + T^lambda * s_hi and solve against fp = low + T^lambda * high.
        Coeffs t(g.begin(), g.begin() + lambda);
        Coeffs s_hi(g.begin() + lambda, g.end());
        Coeffs s = poly_mul(s_hi, hinv, mod, m);
        q = poly_add(q, s, mod);
        r = poly_add(r, t, mod);
        g = poly_mul(s, low, mod, m);
        for (auto& x : g) {
            x = -x;
            mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
        }
    }
    q.resize(m, mpz_class(0));
    r.resize(m, mpz_class(0));
    return {q, r};
}

}  // namespace detail

// Weierstrass preparation: f = p^mu * unit * distinguished, certified mod
// (p^{N-mu}, T^M).  Requires f nonzero at working precision.
inline WeierstrassData weierstrass_prepare(const IwasawaSeries& f) {
    auto [mu, lambda] = mu_lambda(f);
    const SeriesPrecision& prec = f.precision();
    int nc = prec.coeff_precision() - mu;
    SeriesPrecision cert_prec(prec.prime(), nc, prec.degree_cap());
    const mpz_class& mod = cert_prec.modulus();
    size_t m = static_cast<size_t>(prec.degree_cap());

    mpz_class pmu = p_power(prec.prime(), mu);
    detail::Coeffs fp(m, mpz_class(0));
    for (size_t i = 0; i < m; ++i) {
        mpz_class c = f.coeffs()[i] / pmu;  // exact for the canonical residues
        mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
        fp[i] = c;
    }

    auto [q, r] = detail::weierstrass_divide_monomial(fp, lambda, mod, m, nc);

    detail::Coeffs dist(m, mpz_class(0));
    for (size_t i = 0; i < static_cast<size_t>(lambda); ++i) {
        mpz_class c = -r[i];
        mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
        dist[i] = c;
    }
    dist[static_cast<size_t>(lambda)] = 1;

    IwasawaSeries quotient(cert_prec, std::move(q));
    return WeierstrassData{mu, lambda, IwasawaSeries(cert_prec, std::move(dist)),
                           invert_unit_series(quotient), nc};
}

// (1+T)^u as a series, with coefficients the p-adic binomials C(u,k).
// The exact integer lift of u is used throughout, so every coefficient is
// an exact integer binomial before reduction.
inline IwasawaSeries binomial_series(const PadicInt& u, const SeriesPrecision& prec) {
    if (u.prime() != prec.prime()) {
        throw PrimeMismatch("exponent and series precision disagree on p");
    }
    int n = std::min(u.precision(), prec.coeff_precision());
    SeriesPrecision out_prec(prec.prime(), n, prec.degree_cap());
    detail::Coeffs row = detail::binomial_row(u.residue(),
                                              static_cast<size_t>(prec.degree_cap()),
                                              out_prec.modulus());
    return IwasawaSeries(out_prec, std::move(row));
}

namespace detail {

// f(g) for g with g(0) = 0, by Horner from the top coefficient down.  At
// step i the partial value is still to be multiplied by g^i, so its
// coefficients past T^{M-i} never reach the output and the products can
// shrink accordingly.
inline IwasawaSeries compose_ord_positive(const IwasawaSeries& f, const IwasawaSeries& g) {
    if (g.coeff(0) != 0) {
        throw InvalidInput("composition requires a substituted series vanishing at T=0");
    }
    SeriesPrecision prec = SeriesPrecision::join(f.precision(), g.precision());
    const mpz_class& mod = prec.modulus();
    size_t m = static_cast<size_t>(prec.degree_cap());
    Coeffs gc(g.coeffs().begin(), g.coeffs().begin() + m);
    reduce_mod(gc, mod);
    Coeffs acc;
    for (int i = static_cast<int>(m) - 1; i >= 0; --i) {
        acc = poly_mul(acc, gc, mod, m - static_cast<size_t>(i));
        mpz_class c = f.coeffs()[static_cast<size_t>(i)] % mod;
        if (acc.empty()) {
            if (c != 0) acc.push_back(c);
        } else {
            acc[0] += c;
            mpz_mod(acc[0].get_mpz_t(), acc[0].get_mpz_t(), mod.get_mpz_t());
        }
    }
    return IwasawaSeries(prec, std::move(acc));
}

}  // namespace detail

// Generator change: f(T) -> f((1+T)^u - 1) for a unit u.  The order at
// T=0 is preserved and the leading value picks up a factor u^r.
inline IwasawaSeries substitute_generator(const IwasawaSeries& f, const PadicInt& u) {
    if (u.prime() != f.precision().prime()) {
        throw PrimeMismatch("substitution exponent lives over a different prime");
    }
    if (!is_unit(u)) {
        throw NotAUnit("generator substitution requires a unit exponent");
    }
    IwasawaSeries g = binomial_series(u, f.precision());
    g = g - IwasawaSeries::one(g.precision());
    return detail::compose_ord_positive(f, g);
}

// Index substitution: view f as a series in T_U and send T_U to
// (1+T)^d - 1.  The order is preserved and the leading value gains d^r.
inline IwasawaSeries substitute_index(const IwasawaSeries& f, long d) {
    if (d < 1) throw InvalidInput("index substitution requires d >= 1");
    const SeriesPrecision& prec = f.precision();
    detail::Coeffs row = detail::binomial_row(mpz_class(d),
                                              static_cast<size_t>(prec.degree_cap()),
                                              prec.modulus());
    row[0] = 0;  // (1+T)^d - 1
    IwasawaSeries g(prec, std::move(row));
    return detail::compose_ord_positive(f, g);
}

// omega_n(T) = (1+T)^{p^n} - 1, the coinvariant polynomial at level n.
inline IwasawaSeries omega(long p, int n, const SeriesPrecision& prec) {
    if (p != prec.prime()) throw PrimeMismatch("omega prime disagrees with precision");
    if (n < 0) throw InvalidInput("omega level must be >= 0");
    double approx = std::pow(static_cast<double>(p), n);
    if (approx >= static_cast<double>(prec.degree_cap())) {
        throw DegreeCapExceeded("omega_" + std::to_string(n) + " has degree p^n >= M");
    }
    long pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    detail::Coeffs row = detail::binomial_row(mpz_class(pn),
                                              static_cast<size_t>(pn) + 1, prec.modulus());
    row[0] = 0;
    return IwasawaSeries(prec, std::move(row));
}

// Phi_{p^i}(1+T): the p^i-th cyclotomic polynomial evaluated at 1+T, a
// distinguished polynomial of degree p^i - p^{i-1}.  By convention i = 0
// gives T (the T-primary factor).
inline IwasawaSeries cyclotomic_gamma(long p, int i, const SeriesPrecision& prec) {
    if (p != prec.prime()) throw PrimeMismatch("cyclotomic prime disagrees with precision");
    if (i < 0) throw InvalidInput("cyclotomic index must be >= 0");
    if (i == 0) return IwasawaSeries::variable(prec);
    double deg_approx = std::pow(static_cast<double>(p), i) -
                        std::pow(static_cast<double>(p), i - 1);
    if (deg_approx >= static_cast<double>(prec.degree_cap())) {
        throw DegreeCapExceeded("Phi_{p^" + std::to_string(i) + "} has degree >= M");
    }
    long pi = 1;
    for (int k = 0; k < i; ++k) pi *= p;
    long pim1 = pi / p;
    // omega_i / omega_{i-1}, computed as exact polynomials regardless of M.
    detail::Coeffs wi = detail::binomial_row(mpz_class(pi), static_cast<size_t>(pi) + 1,
                                             prec.modulus());
    wi[0] = 0;
    detail::Coeffs wim1 = detail::binomial_row(mpz_class(pim1),
                                               static_cast<size_t>(pim1) + 1, prec.modulus());
    wim1[0] = 0;
    auto [q, r] = detail::poly_divmod_monic(wi, wim1, prec.modulus());
    if (detail::poly_degree(r) >= 0) {
        throw Error("internal: omega_i not divisible by omega_{i-1}");
    }
    return IwasawaSeries(prec, std::move(q));
}

namespace detail {

// Division-free determinant of a small matrix over a commutative ring,
// by dynamic programming over row subsets (columns are consumed left to
// right in popcount order).
inline Coeffs det_subset_dp(const std::vector<std::vector<Coeffs>>& a, const mpz_class& mod) {
    size_t n = a.size();
    size_t full = (size_t{1} << n);
    std::vector<Coeffs> dp(full);
    dp[0] = Coeffs{mpz_class(1)};
    for (size_t mask = 1; mask < full; ++mask) {
        size_t col = static_cast<size_t>(__builtin_popcountll(mask)) - 1;
        Coeffs acc;
        int sign = 1;
        for (size_t i = 0; i < n; ++i) {
            if (!(mask & (size_t{1} << i))) continue;
            const Coeffs& entry = a[i][col];
            if (poly_degree(entry) >= 0) {
                Coeffs term = poly_mul(entry, dp[mask ^ (size_t{1} << i)], mod);
                if (sign < 0) {
                    for (auto& x : term) {
                        x = -x;
                        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
                    }
                }
                acc = poly_add(acc, term, mod);
            }
            sign = -sign;
        }
        dp[mask] = std::move(acc);
    }
    return dp[full - 1];
}

}  // namespace detail

// Norm map from Zp[[T]] to the subalgebra Zp[[T_U]], T_U = (1+T)^d - 1.
// Zp[[T]] is free of rank d over Zp[[T_U]] on 1, T, ..., T^{d-1}; the norm
// of f is the determinant of multiplication by f on this basis, with the
// sign normalized so that the map is multiplicative and N(T) = T_U.
//
// The input is read as a polynomial of degree < M; the result is a
// polynomial in T_U of the same degree, returned at the same precision.
inline IwasawaSeries norm_to_subalgebra(const IwasawaSeries& f, long d) {
    if (d < 1) throw InvalidInput("norm requires d >= 1");
    const SeriesPrecision& prec = f.precision();
    const mpz_class& mod = prec.modulus();
    detail::Coeffs fp = f.poly();
    int df = detail::poly_degree(fp);
    if (df < 0) return IwasawaSeries(prec);
    if (df + d - 1 >= prec.degree_cap()) {
        throw DegreeCapExceeded("norm intermediates of degree " +
                                std::to_string(df + d - 1) + " exceed the cap");
    }

    // Reduction rule in the quotient: T^d = S - sum_{j=1}^{d-1} C(d,j) T^j.
    std::vector<mpz_class> binom(static_cast<size_t>(d), mpz_class(0));
    for (long j = 1; j < d; ++j) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(d),
                     static_cast<unsigned long>(j));
        binom[static_cast<size_t>(j)] = b % mod;
    }

    // Column j: coordinates of f * T^j over the basis, entries in Z/p^N[S].
    std::vector<std::vector<detail::Coeffs>> mat(
        static_cast<size_t>(d), std::vector<detail::Coeffs>(static_cast<size_t>(d)));
    for (long j = 0; j < d; ++j) {
        std::vector<detail::Coeffs> x(static_cast<size_t>(df + j) + 1);
        for (int i = 0; i <= df; ++i) {
            x[static_cast<size_t>(i + j)] = detail::Coeffs{fp[static_cast<size_t>(i)]};
        }
        for (int e = static_cast<int>(x.size()) - 1; e >= static_cast<int>(d); --e) {
            detail::Coeffs q = std::move(x[static_cast<size_t>(e)]);
            x[static_cast<size_t>(e)].clear();
            if (detail::poly_degree(q) < 0) continue;
            for (long j2 = 1; j2 < d; ++j2) {
                if (binom[static_cast<size_t>(j2)] == 0) continue;
                detail::Coeffs scaled = q;
                for (auto& c : scaled) {
                    c = -c * binom[static_cast<size_t>(j2)];
                    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
                }
                x[static_cast<size_t>(e - d + j2)] =
                    detail::poly_add(x[static_cast<size_t>(e - d + j2)], scaled, mod);
            }
            detail::Coeffs shifted(q.size() + 1, mpz_class(0));
            for (size_t k = 0; k < q.size(); ++k) shifted[k + 1] = q[k];
            x[static_cast<size_t>(e - d)] =
                detail::poly_add(x[static_cast<size_t>(e - d)], shifted, mod);
        }
        for (long i = 0; i < d; ++i) {
            mat[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                std::move(x[static_cast<size_t>(i)]);
        }
    }

    detail::Coeffs det = detail::det_subset_dp(mat, mod);
    // The raw determinant carries a sign (-1)^{(d-1) lambda(f)}; flip it
    // for even d and odd lambda so that N(T) = T_U.
    if (d % 2 == 0) {
        int lambda = mu_lambda(f).second;
        if (lambda % 2 != 0) {
            for (auto& c : det) {
                c = -c;
                mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
            }
        }
    }
    return IwasawaSeries(prec, std::move(det));
}

}  // namespace iwa
