#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "lsr/mat2.hpp"

using namespace lsr;
namespace {
constexpr double pi = std::numbers::pi;

// Independent oracle: |roots of x^2 - tr x + det| via complex arithmetic.
double rho_complex_oracle(const Matrix2& m) {
    const std::complex<double> tr(m.trace(), 0), det(m.det(), 0);
    const std::complex<double> s = std::sqrt(tr * tr - 4.0 * det);
    return std::max(std::abs((tr + s) / 2.0), std::abs((tr - s) / 2.0));
}

Matrix2 random_matrix(std::mt19937_64& rng, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng), u(rng)};
}
}  // namespace

TEST_CASE("spectral radius closed form") {
    CHECK(spectral_radius(Matrix2::identity()) == doctest::Approx(1.0));
    CHECK(spectral_radius(Matrix2{0, 1, 0, 0}) == doctest::Approx(0.0));

    // Shear times rotation, cross-checked against the complex-root oracle.
    const Matrix2 m = Matrix2{1, 1, 0, 1} * rotation(pi / 3);
    CHECK(spectral_radius(m) == doctest::Approx(rho_complex_oracle(m)).epsilon(1e-12));

    std::mt19937_64 rng(20240517);
    for (int i = 0; i < 2000; ++i) {
        const Matrix2 a = random_matrix(rng);
        CHECK(spectral_radius(a) == doctest::Approx(rho_complex_oracle(a)).epsilon(1e-10));
    }
}

TEST_CASE("op_norm closed form") {
    CHECK(op_norm(Matrix2{3, 0, 0, 4}) == doctest::Approx(4.0));
    CHECK(op_norm(Matrix2::zero()) == doctest::Approx(0.0));
    // Brute-force maximization of |mv| over unit vectors.
    const Matrix2 m{1, 1, 0, 1};
    double best = 0;
    for (int i = 0; i < 200000; ++i) {
        const double t = 2 * pi * i / 200000.0;
        const double x = std::cos(t), y = std::sin(t);
        best = std::max(best, std::hypot(m.a11 * x + m.a12 * y, m.a21 * x + m.a22 * y));
    }
    CHECK(op_norm(m) == doctest::Approx(best).epsilon(1e-8));
    CHECK(op_norm(m) == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-12));
}

TEST_CASE("rotation constructor") {
    const Matrix2 r0 = rotation(0);
    CHECK(r0.a11 == doctest::Approx(1.0));
    CHECK(r0.a12 == doctest::Approx(0.0));
    const Matrix2 r90 = rotation(pi / 2);
    CHECK(r90.a11 == doctest::Approx(0.0));
    CHECK(r90.a12 == doctest::Approx(-1.0));
    CHECK(r90.a21 == doctest::Approx(1.0));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 500; ++i) {
        const double a = u(rng), b = u(rng);
        const Matrix2 lhs = rotation(a) * rotation(b);
        const Matrix2 rhs = rotation(a + b);
        CHECK(frobenius_norm(lhs - rhs) < 1e-12);
        CHECK(spectral_radius(rotation(a)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(op_norm(rotation(a)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("classify membership") {
    CHECK(classify_membership(Matrix2{1, 2, 0, 0}).cls == MatrixClass::InP);
    const Membership nil = classify_membership(Matrix2{0, 1, 0, 0});
    CHECK(nil.cls == MatrixClass::Neither);
    CHECK(nil.borderline);
    CHECK(classify_membership(rotation(pi / 3)).cls == MatrixClass::InE);
    // Real distinct eigenvalues: neither class.
    CHECK(classify_membership(Matrix2{2, 0, 0, 1}).cls == MatrixClass::Neither);
    CHECK_FALSE(classify_membership(Matrix2{2, 0, 0, 1}).borderline);
}

TEST_CASE("constructors reject non-finite entries") {
    CHECK_THROWS_AS(Matrix2(std::nan(""), 0, 0, 0), error);
    CHECK_THROWS_AS(Matrix2(0, INFINITY, 0, 0), error);
    CHECK_THROWS_AS(rotation(INFINITY), error);
}

TEST_CASE("spectral radius properties") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 3000; ++i) {
        const Matrix2 a = random_matrix(rng), b = random_matrix(rng);
        const double rab = spectral_radius(a * b), rba = spectral_radius(b * a);
        CHECK(std::abs(rab - rba) <= 1e-10 * std::max(1.0, std::max(rab, rba)));
        CHECK(op_norm(a * b) <= op_norm(a) * op_norm(b) * (1 + 1e-12));
        CHECK(spectral_radius(a) <= op_norm(a) * (1 + 1e-12));
        CHECK(spectral_radius(a) <= frobenius_norm(a) * (1 + 1e-12));
    }
}
