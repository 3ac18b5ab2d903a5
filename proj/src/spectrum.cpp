#include "lsr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lsr {

namespace {
constexpr double pi = std::numbers::pi;
}

double hr_trace(double lambda, double alpha, double theta, long n) {
    return lambda * std::cos(n * theta) + alpha * std::sin(n * theta);
}

double theta_zero(double lambda, double alpha) {
    if (lambda == 0.0) fail(errc::not_in_domain, "lambda must be nonzero");
    if (alpha == 0.0) return pi / 2;
    return std::atan(-lambda / alpha);
}

double dist_coset_fp(double x, double a, double b) {
    const double t = (x - a) / b;
    return std::abs(t - std::nearbyint(t)) * b;
}

double trace_word(double lambda, double alpha, double theta, const Word& w) {
    if (lambda == 0.0) fail(errc::not_in_domain, "lambda must be nonzero");
    if (w.blocks.empty()) fail(errc::invalid_word, "empty product");
    double prod = 1.0;
    long hsum = 0;
    for (const auto& b : w.blocks) {
        if (b.h_exp < 1 || b.r_exp < 1) fail(errc::invalid_word, "block exponents must be >= 1");
        hsum += b.h_exp;
        prod *= std::cos(b.r_exp * theta) + (alpha / lambda) * std::sin(b.r_exp * theta);
    }
    return std::pow(lambda, (double)hsum) * prod;
}

double rho_word(double lambda, double alpha, double theta, const Word& w) {
    return std::abs(trace_word(lambda, alpha, theta, w));
}

const char* lsr_status_name(LsrStatus s) {
    switch (s) {
        case LsrStatus::ZeroCertified: return "ZeroCertified";
        case LsrStatus::AttainedHeuristic: return "AttainedHeuristic";
        case LsrStatus::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

namespace {

inline double lsr_term(double lambda, double alpha, double theta, long n) {
    return std::pow(std::abs(hr_trace(lambda, alpha, theta, n)), 1.0 / (n + 1));
}

// Deterministic argmin scan: smallest value, ties broken by smaller n.
std::pair<double, long> scan_min(double lambda, double alpha, double theta, long N,
                                 bool parallel) {
    double best = std::numeric_limits<double>::infinity();
    long best_n = -1;
    if (parallel) {
#pragma omp parallel
        {
            double loc = std::numeric_limits<double>::infinity();
            long loc_n = -1;
#pragma omp for schedule(static) nowait
            for (long n = 0; n <= N; ++n) {
                const double v = lsr_term(lambda, alpha, theta, n);
                if (v < loc || (v == loc && n < loc_n)) {
                    loc = v;
                    loc_n = n;
                }
            }
#pragma omp critical
            {
                if (loc < best || (loc == best && loc_n < best_n)) {
                    best = loc;
                    best_n = loc_n;
                }
            }
        }
    } else {
        for (long n = 0; n <= N; ++n) {
            const double v = lsr_term(lambda, alpha, theta, n);
            if (v < best) {
                best = v;
                best_n = n;
            }
        }
    }
    return {best, best_n};
}

}  // namespace

LsrEstimate lsr_estimate(double lambda, double alpha, double theta, long N,
                         const LsrOptions& opts) {
    if (lambda == 0.0) fail(errc::not_in_domain, "lambda must be nonzero");
    if (N < 1) fail(errc::not_in_domain, "truncation must be >= 1");

    LsrEstimate est;
    est.truncation = N;
    auto [best, best_n] = scan_min(lambda, alpha, theta, N, opts.parallel);
    est.value = best;
    est.argmin = best_n;

    if (opts.keep_per_n) {
        est.per_n.emplace();
        est.per_n->reserve(N + 1);
        for (long n = 0; n <= N; ++n)
            est.per_n->emplace_back(n, lsr_term(lambda, alpha, theta, n));
    }

    // Zero certification: trace residual below tolerance and the explicit
    // product H R^n H vanishing as a matrix.
    const double residual = std::abs(hr_trace(lambda, alpha, theta, best_n));
    if (residual <= opts.zero_tol) {
        const Matrix2 hmat{lambda, alpha, 0, 0};
        const Matrix2 prod = hmat * rotation(best_n * theta) * hmat;
        if (op_norm(prod) <= opts.zero_tol) {
            est.value = 0.0;  // the certified infimum is exactly zero
            est.status = LsrStatus::ZeroCertified;
            return est;
        }
    }

    if (best_n <= N / 2) {
        bool strict = true;
        for (long n = best_n + 1; n <= N && strict; ++n)
            if (lsr_term(lambda, alpha, theta, n) <= best) strict = false;
        if (strict) {
            est.status = LsrStatus::AttainedHeuristic;
            return est;
        }
    }
    est.status = LsrStatus::Undetermined;
    return est;
}

RatioBound ratio_bound(double lambda, double alpha, long grid) {
    if (lambda == 0.0) fail(errc::not_in_domain, "lambda must be nonzero");
    if (grid < 1000) fail(errc::not_in_domain, "grid must be >= 1000");

    RatioBound rb;
    rb.theta0 = theta_zero(lambda, alpha);
    rb.grid_points = grid;

    // Both |lambda cos t + alpha sin t| and dist(t, theta0 + pi Z) have period
    // pi, so one period suffices. Points too close to theta0 are excluded; the
    // ratio extends continuously there and the neighbours capture the limit.
    const double excl = 1e-6;
    double sup = 0.0;
    double inf = std::numeric_limits<double>::infinity();
    for (long i = 0; i < grid; ++i) {
        const double t = -pi / 2 + pi * (i + 0.5) / grid;
        const double g = dist_coset_fp(t, rb.theta0, pi);
        if (g < excl) continue;
        const double f = std::abs(lambda * std::cos(t) + alpha * std::sin(t));
        const double ratio = f / g;
        sup = std::max(sup, ratio);
        inf = std::min(inf, ratio);
    }
    rb.c0 = std::max(sup, 1.0 / inf) * 1.05;
    rb.c0 = std::max(rb.c0, 1.0 + 1e-9);
    return rb;
}

std::optional<ZeroProductCert> find_zero_product(double lambda, double alpha, double theta,
                                                 long M, double tol) {
    if (lambda == 0.0) fail(errc::not_in_domain, "lambda must be nonzero");
    if (M < 1) fail(errc::not_in_domain, "M must be >= 1");
    const Matrix2 hmat{lambda, alpha, 0, 0};
    for (long m = 1; m <= M; ++m) {
        const double res = std::abs(hr_trace(lambda, alpha, theta, m));
        if (res <= tol) {
            const double prod = op_norm(hmat * rotation(m * theta) * hmat);
            if (prod <= tol) return ZeroProductCert{m, res, prod};
        }
    }
    return std::nullopt;
}

double perturb_to_zero(double lambda, double alpha, double theta, long m) {
    if (lambda == 0.0) fail(errc::not_in_domain, "lambda must be nonzero");
    if (m < 1) fail(errc::not_in_domain, "m must be >= 1");
    const double t0 = theta_zero(lambda, alpha);
    const double j = std::nearbyint((m * theta - t0) / pi);
    double tp = (t0 + j * pi) / m;
    // Newton cleans up the rounding of (t0 + j pi)/m; a neighbour scan then
    // lands on the double closest to the true zero. The residual floor is set
    // by the ulp of m*theta', not by the iteration.
    for (int it = 0; it < 2; ++it) {
        const double f = hr_trace(lambda, alpha, tp, m);
        const double df = m * (alpha * std::cos(m * tp) - lambda * std::sin(m * tp));
        if (df != 0.0) tp -= f / df;
    }
    double best = tp, best_res = std::abs(hr_trace(lambda, alpha, tp, m));
    for (int k = -2; k <= 2; ++k) {
        const double cand = tp + k * std::abs(tp) * 0x1p-52;
        const double res = std::abs(hr_trace(lambda, alpha, cand, m));
        if (res < best_res) {
            best = cand;
            best_res = res;
        }
    }
    return best;
}

}  // namespace lsr
