#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lsr/mat2.hpp"
#include "lsr/words.hpp"

namespace lsr {

// Everything in this module works in canonical scale: H = [[lambda, alpha],[0,0]],
// R = rotation(theta). Multiply results by gamma for the original pair.

// tr(H R^n) = lambda cos(n theta) + alpha sin(n theta).
double hr_trace(double lambda, double alpha, double theta, long n);

// The unique zero of |lambda cos t + alpha sin t| in (-pi/2, pi/2]:
// pi/2 when alpha = 0, atan(-lambda/alpha) otherwise.
double theta_zero(double lambda, double alpha);

// Distance from x to the nearest point of a + b*Z.
double dist_coset_fp(double x, double a, double b);

// Closed-form trace of the block word: lambda^{sum n_i} prod_i (cos m_i theta
// + alpha/lambda sin m_i theta). All block exponents must be >= 1.
double trace_word(double lambda, double alpha, double theta, const Word& w);

// |trace_word|; the product matrix has one zero eigenvalue, so this is its
// spectral radius.
double rho_word(double lambda, double alpha, double theta, const Word& w);

enum class LsrStatus { ZeroCertified, AttainedHeuristic, Undetermined };
const char* lsr_status_name(LsrStatus s);

struct LsrEstimate {
    double value = 0;               // min_{0<=n<=N} |tr(H R^n)|^{1/(n+1)}
    std::optional<long> argmin;     // smallest minimizing n
    long truncation = 0;            // N
    LsrStatus status = LsrStatus::Undetermined;
    std::optional<std::vector<std::pair<long, double>>> per_n;
};

struct LsrOptions {
    double zero_tol = 1e-10;  // absolute, on trace residuals
    bool keep_per_n = false;
    bool parallel = true;
};

// Truncated infimum of |tr(H R^n)|^{1/(n+1)} over 0 <= n <= N (the n = 0 term
// is |lambda| = rho(H)). The infimum itself may be non-attained, so the status
// is three-valued: ZeroCertified needs the explicit product H R^m H to vanish;
// AttainedHeuristic needs argmin <= N/2 with every later term strictly above.
LsrEstimate lsr_estimate(double lambda, double alpha, double theta, long N,
                         const LsrOptions& opts = {});

struct RatioBound {
    double theta0 = 0;  // in (-pi/2, pi/2]
    double c0 = 1;      // > 1
    long grid_points = 0;
};

// Numerical two-sided comparison constant:
//   c0^-1 dist(t, theta0 + pi Z) <= |lambda cos t + alpha sin t| <= c0 dist(...)
// estimated on a uniform grid and inflated by 5%.
RatioBound ratio_bound(double lambda, double alpha, long grid = 100000);

struct ZeroProductCert {
    long m = 0;
    double residual_trace = 0;    // |lambda cos(m theta) + alpha sin(m theta)|
    double residual_product = 0;  // ||H R^m H||
};

// Smallest m <= M with both residuals below tol; absence is a value.
std::optional<ZeroProductCert> find_zero_product(double lambda, double alpha, double theta,
                                                 long M, double tol = 1e-10);

// Nearest angle of the form (theta0 + j pi)/m; zeroes tr(H R'^m) and moves
// theta by at most pi/(2m).
double perturb_to_zero(double lambda, double alpha, double theta, long m);

}  // namespace lsr
