#pragma once

#include <string>
#include <vector>

#include "iwa/errors.hpp"
#include "iwa/series.hpp"

namespace iwa {

// Element of the fraction field Q(Gamma), kept as an explicit num/den
// pair.  Fractions are never forced into lowest terms: equality and the
// order at T=0 are the only total operations, and leading values are
// meaningful only modulo units.
class FractionElement {
  public:
    FractionElement(IwasawaSeries num, IwasawaSeries den,
                    bool normalized_mod_units = false)
        : num_(std::move(num)), den_(std::move(den)),
          normalized_mod_units_(normalized_mod_units) {
        if (!ord_at_zero(den_)) {
            throw InvalidInput("fraction denominator vanishes at working precision");
        }
    }

    static FractionElement from_series(IwasawaSeries num) {
        SeriesPrecision prec = num.precision();
        return FractionElement(std::move(num), IwasawaSeries::one(prec));
    }

    static FractionElement one(const SeriesPrecision& prec) {
        return FractionElement(IwasawaSeries::one(prec), IwasawaSeries::one(prec));
    }

    const IwasawaSeries& num() const { return num_; }
    const IwasawaSeries& den() const { return den_; }
    bool normalized_mod_units() const { return normalized_mod_units_; }

  private:
    IwasawaSeries num_;
    IwasawaSeries den_;
    bool normalized_mod_units_;
};

// Cross-multiplication equality at the joined precision.
inline bool fraction_equal(const FractionElement& a, const FractionElement& b) {
    return congruent(a.num() * b.den(), b.num() * a.den());
}

inline FractionElement fraction_mul(const FractionElement& a, const FractionElement& b) {
    return FractionElement(a.num() * b.num(), a.den() * b.den(),
                           a.normalized_mod_units() && b.normalized_mod_units());
}

// ord_{T=0} of a fraction; may be negative.
inline long ord_of_fraction(const FractionElement& x) {
    auto rn = ord_at_zero(x.num());
    if (!rn) throw IndeterminateOrder("fraction numerator vanishes at working precision");
    auto rd = ord_at_zero(x.den());
    return static_cast<long>(*rn) - static_cast<long>(*rd);
}

// Cancel the common power of T; keeps equality and ord unchanged.
inline FractionElement cancel_t_power(const FractionElement& x) {
    auto rn = ord_at_zero(x.num());
    auto rd = ord_at_zero(x.den());
    if (!rn || !rd) return x;
    int k = std::min(*rn, *rd);
    if (k == 0) return x;
    auto shift = [&](const IwasawaSeries& f) {
        detail::Coeffs c(f.coeffs().begin() + k, f.coeffs().end());
        return IwasawaSeries(f.precision(), std::move(c));
    };
    return FractionElement(shift(x.num()), shift(x.den()), x.normalized_mod_units());
}

// Characteristic element of one homology degree.
struct GradedChar {
    int degree = 0;
    IwasawaSeries ch;
};

using GradedCharList = std::vector<GradedChar>;

// Alternating product prod ch_i^{(-1)^i}: even degrees multiply the
// numerator, odd degrees the denominator.
inline FractionElement akashi_compose(const GradedCharList& chs) {
    if (chs.empty()) throw InvalidInput("empty graded characteristic list");
    for (size_t i = 0; i < chs.size(); ++i) {
        if (chs[i].degree < 0) throw InvalidInput("homology degrees are non-negative");
        for (size_t j = i + 1; j < chs.size(); ++j) {
            if (chs[i].degree == chs[j].degree) {
                throw InvalidInput("duplicate homology degree " +
                                   std::to_string(chs[i].degree));
            }
        }
        if (chs[i].ch.is_zero()) {
            throw TorsionViolation("characteristic element in degree " +
                                   std::to_string(chs[i].degree) +
                                   " vanishes at working precision");
        }
    }
    SeriesPrecision prec = chs[0].ch.precision();
    for (const auto& e : chs) prec = SeriesPrecision::join(prec, e.ch.precision());
    IwasawaSeries num = IwasawaSeries::one(prec);
    IwasawaSeries den = IwasawaSeries::one(prec);
    for (const auto& e : chs) {
        if (e.degree % 2 == 0) {
            num = num * e.ch;
        } else {
            den = den * e.ch;
        }
    }
    return FractionElement(std::move(num), std::move(den));
}

// Local reduction behaviour at one place, reduced to its contribution to
// the Akashi series of the dual Selmer group.
enum class LocalFactorRule {
    GoodOrdinary,    // reduced-curve tower homology: trivial contribution
    SplitMultCaseI,  // split product-type local tower: contributes T
    SplitMultCaseII, // split multi-false-Tate local tower: a unit class
    NonSplitMult,    // no contribution to characteristic elements
    AwayFromP,       // residue characteristic != p: a unit class
};

inline const char* local_factor_name(LocalFactorRule rule) {
    switch (rule) {
        case LocalFactorRule::GoodOrdinary: return "good_ordinary";
        case LocalFactorRule::SplitMultCaseI: return "split_I";
        case LocalFactorRule::SplitMultCaseII: return "split_II";
        case LocalFactorRule::NonSplitMult: return "nonsplit";
        case LocalFactorRule::AwayFromP: return "away_from_p";
    }
    return "?";
}

// Single source of truth for the order contribution of each rule.
inline int local_ord_contribution(LocalFactorRule rule) {
    switch (rule) {
        case LocalFactorRule::GoodOrdinary: return 0;
        case LocalFactorRule::SplitMultCaseI: return 1;
        case LocalFactorRule::SplitMultCaseII: return 0;
        case LocalFactorRule::NonSplitMult: return 0;
        case LocalFactorRule::AwayFromP: return 0;
    }
    return 0;
}

struct LocalFactor {
    FractionElement contribution;
    int ord_contribution = 0;
    // A unit-class contribution has order 0 but an unspecified unit
    // leading value; the value 1 stored here is a representative only.
    bool unit_class = false;
};

inline LocalFactor local_factor(LocalFactorRule rule, const SeriesPrecision& prec) {
    switch (rule) {
        case LocalFactorRule::GoodOrdinary:
        case LocalFactorRule::NonSplitMult:
            return LocalFactor{FractionElement::one(prec), 0, false};
        case LocalFactorRule::SplitMultCaseI:
            return LocalFactor{
                FractionElement::from_series(IwasawaSeries::variable(prec)), 1, false};
        case LocalFactorRule::SplitMultCaseII:
        case LocalFactorRule::AwayFromP:
            return LocalFactor{FractionElement::one(prec), 0, true};
    }
    throw InvalidInput("unknown local factor rule");
}

// Akashi series of the dual Selmer group over the full extension: the
// cyclotomic characteristic element times the local contributions.
inline FractionElement akashi_selmer_formula(const IwasawaSeries& ch_cyc,
                                             const std::vector<LocalFactorRule>& locals,
                                             const SeriesPrecision& prec) {
    if (ch_cyc.is_zero()) {
        throw TorsionViolation("cyclotomic characteristic element vanishes at "
                               "working precision");
    }
    FractionElement out =
        FractionElement::from_series(at_precision(
            ch_cyc, SeriesPrecision::join(ch_cyc.precision(), prec)));
    for (LocalFactorRule rule : locals) {
        out = fraction_mul(out, local_factor(rule, prec).contribution);
    }
    return out;
}

// Evaluation through an induced representation: substitute T_U by
// (1+T)^d - 1.  The order is unchanged and the leading value gains d^r.
struct InducedEvaluation {
    IwasawaSeries series;
    long ord = 0;
    PadicInt leading_correction;
};

inline InducedEvaluation eval_induced(const IwasawaSeries& f_in_tu, long d) {
    auto r = ord_at_zero(f_in_tu);
    if (!r) throw IndeterminateOrder("series in T_U vanishes at working precision");
    IwasawaSeries g = substitute_index(f_in_tu, d);
    PadicInt correction =
        pow(PadicInt(f_in_tu.precision().prime(),
                     f_in_tu.precision().coeff_precision(), d),
            static_cast<unsigned long>(*r));
    return InducedEvaluation{std::move(g), static_cast<long>(*r), std::move(correction)};
}

// Order-level consistency of the Artin-formalism relation: with d = p^{n-1}(p-1),
//   ord(ak_big) = ord(ak_small) + d * ord(phi_rho) + (p-1) * ord(unit_norm),
// where the last term is zero since unit_norm must be a unit.
inline bool artin_formalism_check(const FractionElement& ak_big,
                                  const FractionElement& ak_small,
                                  const FractionElement& phi_rho,
                                  const IwasawaSeries& unit_norm, long p, int n) {
    if (!is_unit(unit_norm)) {
        throw NotAUnit("the norm factor must be a unit");
    }
    if (n < 1) throw InvalidInput("level n must be >= 1");
    long d = p - 1;
    for (int i = 1; i < n; ++i) d *= p;
    long lhs = ord_of_fraction(ak_big);
    long rhs = ord_of_fraction(ak_small) + d * ord_of_fraction(phi_rho) +
               (p - 1) * static_cast<long>(*ord_at_zero(unit_norm));
    return lhs == rhs;
}

}  // namespace iwa
