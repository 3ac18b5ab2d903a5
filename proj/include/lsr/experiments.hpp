#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsr/canonical.hpp"
#include "lsr/certificate.hpp"
#include "lsr/spectrum.hpp"

namespace lsr {

// Deterministic per-sample angle stream: splitmix64 seeded with
// (seed, sample index), mapped to (0, 2pi). Splitting by index keeps parallel
// sampling reproducible regardless of scheduling.
double sample_theta(std::uint64_t seed, std::uint64_t index);

struct SampleRow {
    long index = 0;
    double theta = 0;
    double value = 0;
    long argmin = -1;
    LsrStatus status = LsrStatus::Undetermined;
};

struct MeasureStats {
    long samples = 0;
    long truncation = 0;
    std::uint64_t seed = 0;
    double attained_positive_fraction = 0;
    double zero_fraction = 0;
    double undetermined_fraction = 0;
    std::map<long, long> argmin_histogram;
    std::vector<SampleRow> rows;

    std::string to_csv() const;  // one row per sample plus a summary row
};

struct SampleOptions {
    bool parallel = true;
    double zero_tol = 1e-10;
};

// Monte-Carlo surrogate for the almost-everywhere attainment statement:
// draws theta uniformly, runs the truncated scan, aggregates statuses.
MeasureStats sample_measure(double lambda, double alpha, long samples, long N,
                            std::uint64_t seed, const SampleOptions& opts = {});

enum class PairLabel { U1, U2, U3, U4, Unresolved };
const char* pair_label_name(PairLabel l);

struct PairClass {
    PairLabel label = PairLabel::Unresolved;
    bool heuristic = true;  // false only for U2 and certificate-backed U3
    CanonicalPair canonical;
    LsrEstimate estimate;
    std::optional<ZeroProductCert> zero_cert;
    bool has_certificate = false;
};

// Evidence-based classifier:
//   zero product found            -> U2
//   matching certificate attached -> U3
//   attained heuristic, value>tol -> U4 (heuristic)
//   value <= tol, no zero product -> U1 (heuristic)
//   otherwise                     -> Unresolved
PairClass classify(const Matrix2& h, const Matrix2& r, long N, long M, double tol,
                   const NonFinitenessCertificate* cert = nullptr);

}  // namespace lsr
