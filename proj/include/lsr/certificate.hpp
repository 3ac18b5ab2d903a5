#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "lsr/cf.hpp"

namespace lsr {

// Exact-arithmetic ledger witnessing that the truncated infimum of
// dist(n theta, a + bZ)^{1/(n+1)} keeps strictly improving beyond every
// checked index, together with a positive floor. The pair it certifies is
//   H = [[lambda, alpha], [0, 0]],  R = rotation(theta)
// with alpha = -lambda / tan(pi a / b) and theta = pi * vartheta / b, where
// vartheta is pinned to an exact rational interval by its partial quotients.
struct NonFinitenessCertificate {
    mpq_class lambda;
    mpz_class a, b;       // b prime >= 5, a nonzero, |a| < b/2
    mpq_class K;          // > 1

    mpz_class cf_a0;
    // Quotient values; quotient = coeff (pow10 == 0) or coeff * 10^pow10.
    struct Quotient {
        mpz_class coeff;
        unsigned long pow10 = 0;
    };
    std::vector<Quotient> cf_quotients;

    long seed_len = 0;        // index N of the congruent-prefix tip
    long copied_depth = 0;    // quotients copied from the target angle itself
    bool fallback_used = false;
    int steps_requested = 0;
    int steps_done = 0;
    bool budget_stopped = false;
    mpz_class growth_floor_C;

    long checked_to = 0;
    mpq_class delta_lower;     // positive floor of dist(n vt)^{1/(n+1)}, n <= checked_to
    double c0 = 0;             // comparison constant from the ratio bound
    double lsr_floor = 0;      // pi * delta / (c0 * b)
    // The spectral-radius transfer of the improvement inequality needs
    // K >= (c0 b / pi)^2; with smaller K the certificate still pins the exact
    // coset-distance statement, and the scan cross-check covers the rest.
    double ratio_chain_K = 0;
    bool k_covers_ratio_chain = false;

    RationalInterval vartheta;  // outward-rounded enclosure of vt
    RationalInterval theta;     // pi * vartheta / b using the pi bracket

    struct WitnessRow {
        long n = 0;
        long witness_level = 0;   // convergent index k of the witness q_k
        std::string witness_q;    // decimal value of q_k (when small enough to print)
        double margin_log10 = 0;  // slack of the strict inequality, decimal digits
    };
    std::vector<WitnessRow> witness_table;

    std::string tool_version;

    ContinuedFraction rebuild_cf() const;  // materializes the quotients
    double alpha_value() const;
    mpz_class quotient_value(size_t i) const;
};

struct ForgeOptions {
    long b_max = 50;            // prime search cap
    long checked_to = 1000;     // requested verified range (capped by coverage)
    ExtendOptions extend;       // digit budget etc.
    long grid = 100000;         // ratio-bound grid for c0
};

// Prime/angle search: the (a, b) with b prime in [5, b_max], a nonzero,
// a/b in (-1/2, 1/2), minimizing |(-lambda / tan(pi a / b)) - alpha_target|.
// Throws no_rational_angle when the best miss is >= eps.
std::tuple<mpz_class, mpz_class, double> select_rational_angle(double lambda,
                                                               double alpha_target, double eps,
                                                               long b_max);

// Full pipeline: angle search, congruent prefix near b*theta_target/pi,
// growth extension, and the exact ledger over the checked range.
NonFinitenessCertificate forge_pair(const mpq_class& lambda, double alpha_target,
                                    double theta_target, const mpq_class& K, const mpq_class& eps,
                                    int steps, const ForgeOptions& opts = {});

struct VerifyReport {
    bool ok = false;
    std::string failure;
    long offending_n = -1;
    long checked_to = 0;
    mpq_class delta_lower;
    double seconds = 0;
};

// Re-checks the certificate from scratch: quotient conformance, congruences,
// growth inequalities, the coset-distance claim and the strict improvement
// inequality for every n <= n_max, all in exact arithmetic.
VerifyReport verify_certificate(const NonFinitenessCertificate& cert, long n_max);

std::string certificate_to_json(const NonFinitenessCertificate& cert, int indent = 2);
NonFinitenessCertificate certificate_from_json(const std::string& text);

}  // namespace lsr
