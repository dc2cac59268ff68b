#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iwa/errors.hpp"
#include "iwa/padic.hpp"

namespace iwa {

enum class ReductionKind { GoodOrdinary, SplitMult, NonSplitMult };

// Case split of the (M_p) condition for a split-multiplicative prime:
// case I local towers contribute T to the Akashi series, case II towers
// only a unit class.
enum class MpCase { CaseI, CaseII };

struct PrimeAboveP {
    ReductionKind kind = ReductionKind::GoodOrdinary;
    std::optional<MpCase> mp_case;  // present iff kind == SplitMult
};

struct ReductionData {
    std::vector<PrimeAboveP> primes_over_p;
    // Optional per-level override for the number of case-I primes of
    // L^cyc; how the count evolves along a tower is input data.
    std::map<std::string, long> m_p_by_level;
};

struct TowerData {
    long m = 0;   // p-powerfree integer > 1
    int levels = 0;
};

// Valuation data entering the leading-coefficient formula.  v_lvalues is
// the contribution of the p-adic absolute value of the ramified local
// L-values: |x|_p = p^{-v} contributes -v.
struct EulerComponents {
    long r_l = 0;
    long gamma_index = 1;  // |Gamma : Gamma_L|, a power of p
    long v_reg = 0;
    long v_sha = 0;
    long v_torsion = 0;
    std::vector<long> v_tamagawa;
    std::vector<long> v_d;
    long v_lvalues = 0;
};

// Arithmetic input record: everything the calculators consume.  Selmer
// coranks, analytic orders and Euler-characteristic components are input
// data, never computed here.
struct Scenario {
    long p = 3;
    std::string curve_label;
    ReductionData reduction;
    std::map<std::string, long> corank;
    std::optional<TowerData> tower;
    std::map<std::string, long> analytic_orders;
    std::optional<EulerComponents> euler;
};

// m is p-powerfree when p^2 does not divide it.
inline bool is_p_powerfree(long p, long m) {
    return m % (p * p) != 0;
}

inline void validate_scenario(const Scenario& scn) {
    if (!is_odd_prime(scn.p)) throw InvalidInput("scenario prime must be an odd prime");
    for (const auto& prime : scn.reduction.primes_over_p) {
        bool split = prime.kind == ReductionKind::SplitMult;
        if (split && !prime.mp_case) {
            throw MissingData("split-multiplicative primes need an (M_p) case");
        }
        if (!split && prime.mp_case) {
            throw InvalidInput("(M_p) case given for a non-split-multiplicative prime");
        }
    }
    if (scn.tower) {
        if (scn.tower->m <= 1) throw InvalidInput("tower parameter m must be > 1");
        if (!is_p_powerfree(scn.p, scn.tower->m)) {
            throw InvalidInput("tower parameter m must be p-powerfree (p^2 does not divide m)");
        }
    }
    if (scn.euler) {
        long g = scn.euler->gamma_index;
        if (g < 1) throw InvalidInput("gamma index must be a positive power of p");
        while (g % scn.p == 0) g /= scn.p;
        if (g != 1) throw InvalidInput("gamma index must be a power of p");
    }
    for (const auto& [level, r] : scn.corank) {
        if (r < 0) throw InvalidInput("corank at " + level + " is negative");
    }
}

// Number of case-I split-multiplicative primes of L^cyc above p.  An
// explicit per-level count wins; otherwise the declared primes are
// counted directly.
inline long m_p_count(const Scenario& scn, const std::string& level) {
    auto it = scn.reduction.m_p_by_level.find(level);
    if (it != scn.reduction.m_p_by_level.end()) {
        if (it->second < 0) throw InvalidInput("m_p counts are non-negative");
        return it->second;
    }
    long count = 0;
    for (const auto& prime : scn.reduction.primes_over_p) {
        if (prime.kind == ReductionKind::SplitMult) {
            if (!prime.mp_case) {
                throw MissingData("split-multiplicative prime lacks an (M_p) case");
            }
            if (*prime.mp_case == MpCase::CaseI) ++count;
        }
    }
    return count;
}

// A theorem application together with the hypotheses it rides on.
struct HypothesisFlaggedValue {
    long value = 0;
    std::vector<std::string> hypotheses;
};

// Order of vanishing of the characteristic element at the regular
// representation of a level: Selmer corank plus the m_p count.
inline HypothesisFlaggedValue vanishing_order_regular(const Scenario& scn,
                                                      const std::string& level) {
    auto it = scn.corank.find(level);
    if (it == scn.corank.end()) {
        throw MissingData("no Selmer corank recorded for level " + level);
    }
    long mp = m_p_count(scn, level);
    HypothesisFlaggedValue out;
    out.value = it->second + mp;
    out.hypotheses = {
        "dual Selmer group over the full extension lies in M_H(G)",
        "Greenberg semisimplicity holds for the dual Selmer group over the "
        "cyclotomic line of this level",
        "the level satisfies (M_p); the full extension is pro-p over it",
    };
    return out;
}

inline long pow_long(long base, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// Unconditional vanishing orders for the two free-rank-one tower cases:
// p^n - 1 in case a, p^n in case b.
inline long uncond_orders(char case_ab, long p, int n) {
    if (n < 1) throw InvalidInput("tower level n must be >= 1");
    if (!is_odd_prime(p)) throw InvalidInput("p must be an odd prime");
    switch (case_ab) {
        case 'a': return pow_long(p, n) - 1;
        case 'b': return pow_long(p, n);
        default: throw InvalidInput("case must be 'a' or 'b'");
    }
}

// s_{E,rho_n} from the corank difference between the layer and its
// subfield: (corank_L - corank_L') / (p^{n-1}(p-1)).
inline long s_via_corank_difference(long p, int n, long corank_l, long corank_lprime) {
    if (n < 1) throw InvalidInput("tower level n must be >= 1");
    if (corank_l < corank_lprime) {
        throw NegativeDifference("corank at the layer is smaller than at the subfield");
    }
    long dim = pow_long(p, n - 1) * (p - 1);
    long diff = corank_l - corank_lprime;
    if (diff % dim != 0) {
        throw NotDivisible("corank difference " + std::to_string(diff) +
                           " is not a multiple of the representation dimension " +
                           std::to_string(dim));
    }
    return diff / dim;
}

// Interval-plus-parity squeeze: the order is bounded above by the scaled
// corank gap, below by 0, and optionally forced odd.
struct DarmonTianResult {
    bool determined = false;
    long value = -1;
    std::vector<long> candidates;
};

inline DarmonTianResult darmon_tian_order(long p, int n, long corank_l,
                                          long corank_lprime_lower_bound,
                                          bool parity_odd) {
    if (n < 1) throw InvalidInput("tower level n must be >= 1");
    if (corank_l < corank_lprime_lower_bound) {
        throw InvalidInput("corank lower bound exceeds the layer corank");
    }
    long dim = pow_long(p, n - 1) * (p - 1);
    long upper = (corank_l - corank_lprime_lower_bound) / dim;  // floor
    DarmonTianResult out;
    for (long v = 0; v <= upper; ++v) {
        if (parity_odd && v % 2 == 0) continue;
        out.candidates.push_back(v);
    }
    if (out.candidates.size() == 1) {
        out.determined = true;
        out.value = out.candidates.front();
    }
    return out;
}

inline bool bsd_inequality_check(long ord_alg, long ord_analytic) {
    return ord_alg <= ord_analytic;
}

// Analytic lower bound over the n-th false-Tate layer, the telescoping
// sum of the induced representation dimensions: p^n - 1.
inline long analytic_lower_bound_false_tate(long p, int n) {
    if (n < 1) throw InvalidInput("tower level n must be >= 1");
    return pow_long(p, n) - 1;
}

// (p, m) is amenable if p | m, or p divides m^{p-1} - 1 exactly once.
inline bool amenable_pair(long p, long m) {
    if (!is_odd_prime(p)) throw InvalidInput("p must be an odd prime");
    if (m <= 1) throw InvalidInput("m must be an integer > 1");
    if (!is_p_powerfree(p, m)) {
        throw InvalidInput("m must be p-powerfree (p^2 does not divide m)");
    }
    if (m % p == 0) return true;
    mpz_class p2 = static_cast<long>(p) * p;
    mpz_class t;
    mpz_powm_ui(t.get_mpz_t(), mpz_class(m).get_mpz_t(),
                static_cast<unsigned long>(p - 1), p2.get_mpz_t());
    return t % p == 1 && t != 1;
}

// p-adic valuation of the leading coefficient of the evaluated
// characteristic element, assembled from the Euler-characteristic data:
//   r_L * v_p(|Gamma:Gamma_L|) + v(Reg) + v(Sha) - 2 v(torsion)
//   + sum v(c_v) + 2 sum v(d_v) + v_lvalues.
inline long euler_leading_valuation(const EulerComponents& c, long p) {
    long g = c.gamma_index;
    long v_gamma = 0;
    while (g % p == 0) {
        g /= p;
        ++v_gamma;
    }
    if (g != 1) throw InvalidInput("gamma index must be a power of p");
    long total = c.r_l * v_gamma + c.v_reg + c.v_sha - 2 * c.v_torsion + c.v_lvalues;
    for (long v : c.v_tamagawa) total += v;
    for (long v : c.v_d) total += 2 * v;
    return total;
}

}  // namespace iwa
