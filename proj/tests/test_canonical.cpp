#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lsr/canonical.hpp"

using namespace lsr;
namespace {
constexpr double pi = std::numbers::pi;

double rel_err(const Matrix2& got, const Matrix2& want) {
    const double scale = std::max(1e-300, frobenius_norm(want));
    return frobenius_norm(got - want) / scale;
}

// Well-conditioned random basis: rotation * diag(d, 1/d) * rotation.
Matrix2 random_basis(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0, 2 * pi);
    std::uniform_real_distribution<double> dd(0.5, 2.0);
    const double d = dd(rng);
    return rotation(ang(rng)) * Matrix2{d, 0, 0, 1 / d} * rotation(ang(rng));
}
}  // namespace

TEST_CASE("reduce recovers the parameters of a shifted pair") {
    // h = [[1,1],[0,0]], r = 2 rot(pi/3): gamma 2, lambda 1/2, theta pi/3, alpha 1/2.
    const Matrix2 h{1, 1, 0, 0};
    const Matrix2 r = rotation(pi / 3) * 2.0;
    const CanonicalPair c = reduce(h, r);
    CHECK(c.gamma == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.lambda == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.theta == doctest::Approx(pi / 3).epsilon(1e-12));
    CHECK(c.alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rel_err(c.basis, Matrix2::identity()) < 1e-9);
}

TEST_CASE("reduce of an already-canonical pair") {
    const CanonicalPair c = reduce(Matrix2{1, 0, 0, 0}, rotation(pi / 4));
    CHECK(c.gamma == doctest::Approx(1.0));
    CHECK(c.lambda == doctest::Approx(1.0));
    CHECK(c.alpha == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.theta == doctest::Approx(pi / 4));
    CHECK(rel_err(c.basis, Matrix2::identity()) < 1e-9);
}

TEST_CASE("reconstruct golden cases") {
    CanonicalPair c;
    c.gamma = 1;
    c.lambda = 1;
    c.alpha = 0;
    c.theta = pi / 2;
    auto [h, r] = reconstruct(c);
    CHECK(rel_err(h, Matrix2{1, 0, 0, 0}) < 1e-14);
    CHECK(rel_err(r, Matrix2{0, -1, 1, 0}) < 1e-14);

    c.gamma = 2;
    c.lambda = 0.5;
    c.alpha = 0.5;
    c.theta = pi / 3;
    auto [h2, r2] = reconstruct(c);
    CHECK(rel_err(h2, Matrix2{1, 1, 0, 0}) < 1e-14);
    CHECK(rel_err(r2, rotation(pi / 3) * 2.0) < 1e-14);
}

TEST_CASE("round trip on random conjugated pairs") {
    std::mt19937_64 rng(123456);  // seed recorded for reproducibility
    std::uniform_real_distribution<double> lam(0.2, 3.0), al(-3.0, 3.0), th(0.05, pi - 0.05),
        ga(0.2, 4.0);
    int sign = 1;
    for (int i = 0; i < 1000; ++i) {
        CanonicalPair src;
        src.gamma = ga(rng);
        src.lambda = sign * lam(rng);
        sign = -sign;
        src.alpha = al(rng);
        src.theta = th(rng);
        src.basis = random_basis(rng);
        src.basis_inv = inverse(src.basis);
        auto [h, r] = reconstruct(src);

        const CanonicalPair got = reduce(h, r);
        CHECK(got.gamma == doctest::Approx(src.gamma).epsilon(1e-8));
        CHECK(got.lambda == doctest::Approx(src.lambda).epsilon(1e-8));
        CHECK(got.alpha == doctest::Approx(src.alpha).epsilon(1e-7));
        CHECK(got.theta == doctest::Approx(src.theta).epsilon(1e-8));

        // Trace identities pinned by the reduction.
        CHECK(got.gamma == doctest::Approx(std::sqrt(r.det())).epsilon(1e-10));
        CHECK(got.lambda == doctest::Approx(h.trace() / got.gamma).epsilon(1e-10));

        auto [h2, r2] = reconstruct(got);
        CHECK(rel_err(h2, h) < 1e-9);
        CHECK(rel_err(r2, r) < 1e-9);
        CHECK(h2.trace() == doctest::Approx(h.trace()).epsilon(1e-10));
        CHECK(r2.det() == doctest::Approx(r.det()).epsilon(1e-10));
    }
}

TEST_CASE("scale equivariance") {
    const Matrix2 h{1, 1, 0, 0};
    const Matrix2 r = rotation(1.1) * 1.5;
    const CanonicalPair base = reduce(h, r);
    for (double c : {0.25, 0.5, 3.0, 7.5}) {
        const CanonicalPair scaled = reduce(h * c, r * c);
        CHECK(scaled.gamma == doctest::Approx(base.gamma * c).epsilon(1e-10));
        CHECK(scaled.lambda == doctest::Approx(base.lambda).epsilon(1e-10));
        CHECK(scaled.alpha == doctest::Approx(base.alpha).epsilon(1e-10));
        CHECK(scaled.theta == doctest::Approx(base.theta).epsilon(1e-10));
    }
}

TEST_CASE("similarity invariance") {
    std::mt19937_64 rng(777);
    const Matrix2 h{0.8, -0.4, 0, 0};
    const Matrix2 r = rotation(0.9) * 2.0;
    const CanonicalPair base = reduce(h, r);
    for (int i = 0; i < 200; ++i) {
        const Matrix2 a = random_basis(rng);
        const Matrix2 ai = inverse(a);
        const CanonicalPair c = reduce(a * h * ai, a * r * ai);
        CHECK(c.gamma == doctest::Approx(base.gamma).epsilon(1e-8));
        CHECK(c.lambda == doctest::Approx(base.lambda).epsilon(1e-8));
        CHECK(c.alpha == doctest::Approx(base.alpha).epsilon(1e-8));
        CHECK(c.theta == doctest::Approx(base.theta).epsilon(1e-8));
    }
}

TEST_CASE("domain and conditioning guards") {
    CHECK_THROWS_AS(reduce(Matrix2{1, 0, 0, 1}, rotation(1.0)), error);  // h not rank one
    CHECK_THROWS_AS(reduce(Matrix2{1, 1, 0, 0}, Matrix2{2, 0, 0, 1}), error);  // r real eigs
    CHECK_THROWS_AS(reduce(Matrix2{0, 1, 0, 0}, rotation(1.0)), error);  // h nilpotent

    // Violent conditioning: basis guard fires.
    const Matrix2 bad{1e6, 0, 0, 1e-6};
    const Matrix2 bad_inv = inverse(bad);
    const Matrix2 h = bad * Matrix2{1, 0, 0, 0} * bad_inv;
    const Matrix2 r = bad * rotation(0.7) * bad_inv;
    CHECK_THROWS_AS(reduce(h, r), error);
}
