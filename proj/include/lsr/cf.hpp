#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsr/dyadic.hpp"
#include "lsr/errors.hpp"

namespace lsr {

struct RationalInterval {
    mpq_class lo, hi;  // lo <= hi

    RationalInterval() = default;
    RationalInterval(mpq_class l, mpq_class h);
    static RationalInterval point(const mpq_class& v) { return {v, v}; }

    mpq_class width() const { return hi - lo; }
    bool contains(const mpq_class& v) const { return lo <= v && v <= hi; }
};

// Continued fraction [a0; a1, a2, ...] with the canonical convergent seed
// (p_-1, q_-1) = (1, 0), (p_0, q_0) = (a0, 1) and the exact recurrence
// p_{k+1} = a_{k+1} p_k + p_{k-1}, q_{k+1} = a_{k+1} q_k + q_{k-1}.
struct ContinuedFraction {
    mpz_class a0;
    std::vector<mpz_class> quotients;  // a1, a2, ... each >= 1

    // Convergent accessors, valid for -1 <= k <= size().
    const mpz_class& p(long k) const { return ps_.at((size_t)(k + 1)); }
    const mpz_class& q(long k) const { return qs_.at((size_t)(k + 1)); }
    long size() const { return (long)quotients.size(); }

    void append(const mpz_class& a);  // validates a >= 1

    static ContinuedFraction from_a0(const mpz_class& a0);

  private:
    std::vector<mpz_class> ps_{1}, qs_{0};  // index shift: ps_[k+1] = p_k
    friend ContinuedFraction convergents(const mpz_class&, const std::vector<mpz_class>&);
};

// Factory applying the exact recurrence; throws invalid_quotient.
ContinuedFraction convergents(const mpz_class& a0, const std::vector<mpz_class>& quotients);

// Bracket [p_{depth-1}/q_{depth-1}, p_depth/q_depth] (sorted). Every infinite
// extension of the first `depth` quotients lies inside it, 1 <= depth <= size.
RationalInterval eval_enclosure(const ContinuedFraction& cf, long depth);

// Distance from x to the nearest point of a + bZ, as an exact interval over
// all x in the input interval. Throws ambiguous_coset when the input straddles
// the midpoint between two coset points.
RationalInterval dist_to_coset(const RationalInterval& x, const mpz_class& a, const mpz_class& b);

// dist(n * theta, a + bZ) for every theta compatible with the first `depth`
// quotients of cf.
RationalInterval dist_coset(const mpz_class& n, const ContinuedFraction& cf, const mpz_class& a,
                            const mpz_class& b, long depth);

// Same for an exactly known rational theta.
RationalInterval dist_coset_exact(const mpq_class& theta, const mpz_class& n, const mpz_class& a,
                                  const mpz_class& b);

// The partial quotients shared by every number in [lo, hi] (the common prefix
// of the endpoint expansions), at most max_terms of them.
std::pair<mpz_class, std::vector<mpz_class>> common_cf_prefix(const RationalInterval& iv,
                                                              size_t max_terms);

// Exact ceil(x^{p/q}) for integer x >= 1, p >= 0, q >= 1.
mpz_class ceil_rational_power(const mpz_class& x, unsigned long p, unsigned long q);

// Congruence-steering prefix: copies quotients of theta0 until any extension
// stays within eps, then appends two (or three, when the divisible branch
// fires) quotients so that the last two convergent numerators are congruent
// to a mod b.  Requires b prime >= 2, a nonzero mod b, enclosure inside
// (-b/2, b/2).
struct SeedResult {
    ContinuedFraction cf;
    long copied_depth = 0;    // n0: quotients taken from theta0 itself
    bool fallback_used = false;  // the divisible-branch a_{n0+1} := 1 step
};
SeedResult seed_congruent_prefix(const RationalInterval& theta0, const mpz_class& a,
                                 const mpz_class& b, const mpq_class& eps);

// One growth quotient b * ceil( (2 K q_cur)^{(1+q_cur)/(1+q_prev)} / q_cur ),
// computed exactly. Exposed for direct validation on small states.
mpz_class growth_quotient(const mpz_class& q_prev, const mpz_class& q_cur, const mpq_class& K,
                          const mpz_class& b);

enum class BudgetPolicy { Error, StopEarly };

struct ExtendOptions {
    long digit_budget = 100'000'000;  // cap on the decimal size of any q_k
    BudgetPolicy on_budget = BudgetPolicy::Error;
    long exact_quotient_bits = 16384;  // larger growth quotients use the d*10^s form
};

struct GrowthStep {
    bool exact = false;       // exact ceiling vs decimal-upper form
    mpz_class coeff;          // quotient = coeff (exact) or b * coeff * 10^pow10
    unsigned long pow10 = 0;
};

struct ExtendInfo {
    int steps_requested = 0;
    int steps_done = 0;
    bool budget_stopped = false;
    mpz_class growth_floor_C;          // smallest power of two with q_{N+1} <= C^{1+q_N}
    std::vector<GrowthStep> steps;     // per appended quotient
    long seed_tip = 0;                 // index N of the congruent prefix tip
};

// Appends `steps` quotients: first the smallest multiple of b whose new
// denominator q_{N+1} exceeds (2 K q_N)^{1+q_N}, then growth quotients from
// growth_quotient / its decimal-upper variant. Each step re-checks the
// congruences and both growth inequalities exactly. Stops or throws on the
// digit budget according to the policy.
ContinuedFraction extend_nonfinite(ContinuedFraction cf, const mpz_class& a, const mpz_class& b,
                                   const mpq_class& K, int steps, const ExtendOptions& opts = {},
                                   ExtendInfo* info = nullptr);

// Proves x^{1/ax} < y^{1/ay} strictly, for positive rationals and positive
// integer roots: exact lcm-cleared integer powers when the cleared sizes stay
// small, rigorous log2 brackets otherwise. Returns false when the reverse
// holds; throws verification_failed when inconclusive at working precision.
bool prove_root_less(const mpq_class& x, const mpz_class& ax, const mpq_class& y,
                     const mpz_class& ay, bool* conclusive_out = nullptr);

// Interval rounded outward to denominators 2^frac_bits (compact endpoints).
RationalInterval outward_round(const RationalInterval& iv, long frac_bits);

// pi enclosure used wherever an exact rational bracket of pi is needed.
RationalInterval pi_interval();

}  // namespace lsr
