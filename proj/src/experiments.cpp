#include "lsr/experiments.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lsr {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

double sample_theta(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ull * (index + 1));
    splitmix64(state);
    const std::uint64_t bits = splitmix64(state);
    // 53-bit mantissa offset by 1/2 ulp keeps the draw inside (0, 2pi).
    const double u = ((double)(bits >> 11) + 0.5) * 0x1p-53;
    return 2.0 * std::numbers::pi * u;
}

MeasureStats sample_measure(double lambda, double alpha, long samples, long N,
                            std::uint64_t seed, const SampleOptions& opts) {
    if (samples < 1) fail(errc::not_in_domain, "samples must be >= 1");
    MeasureStats st;
    st.samples = samples;
    st.truncation = N;
    st.seed = seed;
    st.rows.resize((size_t)samples);

    LsrOptions lopt;
    lopt.zero_tol = opts.zero_tol;
    lopt.parallel = false;  // parallelism is across samples

    auto run_one = [&](long i) {
        const double theta = sample_theta(seed, (std::uint64_t)i);
        const LsrEstimate est = lsr_estimate(lambda, alpha, theta, N, lopt);
        st.rows[(size_t)i] = {i, theta, est.value, est.argmin.value_or(-1), est.status};
    };

    if (opts.parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < samples; ++i) run_one(i);
    } else {
        for (long i = 0; i < samples; ++i) run_one(i);
    }

    long attained = 0, zero = 0, undet = 0;
    for (const auto& row : st.rows) {
        switch (row.status) {
            case LsrStatus::AttainedHeuristic: ++attained; break;
            case LsrStatus::ZeroCertified: ++zero; break;
            case LsrStatus::Undetermined: ++undet; break;
        }
        st.argmin_histogram[row.argmin] += 1;
    }
    st.attained_positive_fraction = (double)attained / (double)samples;
    st.zero_fraction = (double)zero / (double)samples;
    st.undetermined_fraction = (double)undet / (double)samples;
    return st;
}

std::string MeasureStats::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "index,theta,value,argmin,status\n";
    for (const auto& row : rows)
        os << row.index << ',' << row.theta << ',' << row.value << ',' << row.argmin << ','
           << lsr_status_name(row.status) << '\n';
    os << "# samples=" << samples << " truncation=" << truncation << " seed=" << seed
       << " attained_positive_fraction=" << attained_positive_fraction
       << " zero_fraction=" << zero_fraction
       << " undetermined_fraction=" << undetermined_fraction << '\n';
    return os.str();
}

const char* pair_label_name(PairLabel l) {
    switch (l) {
        case PairLabel::U1: return "U1";
        case PairLabel::U2: return "U2";
        case PairLabel::U3: return "U3";
        case PairLabel::U4: return "U4";
        case PairLabel::Unresolved: return "Unresolved";
    }
    return "Unresolved";
}

PairClass classify(const Matrix2& h, const Matrix2& r, long N, long M, double tol,
                   const NonFinitenessCertificate* cert) {
    PairClass out;
    out.canonical = reduce(h, r);
    const double lambda = out.canonical.lambda;
    const double alpha = out.canonical.alpha;
    const double theta = out.canonical.theta;

    out.estimate = lsr_estimate(lambda, alpha, theta, N);
    out.zero_cert = find_zero_product(lambda, alpha, theta, M);

    if (out.zero_cert || out.estimate.status == LsrStatus::ZeroCertified) {
        if (!out.zero_cert) {
            // The scan certified a zero beyond the search bound M; attach the
            // evidence so the U2 label always carries its certificate.
            const long m = out.estimate.argmin.value();
            const Matrix2 hc{lambda, alpha, 0, 0};
            out.zero_cert = ZeroProductCert{m, std::abs(hr_trace(lambda, alpha, theta, m)),
                                            op_norm(hc * rotation(m * theta) * hc)};
        }
        out.label = PairLabel::U2;
        out.heuristic = false;
        return out;
    }

    if (cert) {
        // The certificate speaks for this pair only if its exact parameters
        // match the reduced canonical form. Angles are compared against the
        // certified enclosure (the canonical theta is folded into (0, pi),
        // the certificate's into (-pi/2, pi/2]).
        const double ca = cert->alpha_value();
        const double cl = cert->lambda.get_d();
        const double tlo = cert->theta.lo.get_d(), thi = cert->theta.hi.get_d();
        // |tr(H R^n)| is pi-periodic in theta, so fold into (-pi/2, pi/2];
        // the reflected representative flips both theta and alpha.
        const double fold = theta - std::numbers::pi * std::round(theta / std::numbers::pi);
        const double slack = 1e-9;
        const bool direct = std::abs(alpha - ca) <= slack && fold >= tlo - slack &&
                            fold <= thi + slack;
        const bool reflected = std::abs(alpha + ca) <= slack && -fold >= tlo - slack &&
                               -fold <= thi + slack;
        if (!(std::abs(lambda - cl) <= slack && (direct || reflected)))
            fail(errc::not_in_domain, "certificate does not match the reduced pair");
        out.label = PairLabel::U3;
        out.heuristic = false;
        out.has_certificate = true;
        return out;
    }

    if (out.estimate.status == LsrStatus::AttainedHeuristic && out.estimate.value > tol) {
        out.label = PairLabel::U4;
        out.heuristic = true;
        return out;
    }
    if (out.estimate.value <= tol) {
        out.label = PairLabel::U1;
        out.heuristic = true;
        return out;
    }
    out.label = PairLabel::Unresolved;
    out.heuristic = true;
    return out;
}

}  // namespace lsr
