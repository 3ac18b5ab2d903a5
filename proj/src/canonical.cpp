#include "lsr/canonical.hpp"

#include <algorithm>
#include <cmath>

namespace lsr {

namespace {

// Basis A1 with A1^-1 (r/gamma) A1 = rotation(theta), from the real and
// imaginary parts of an eigenvector for e^{i theta}. Two row variants exist;
// the caller picks the better conditioned one.
Matrix2 rotation_basis(const Matrix2& rhat, double c, double s) {
    // Row 1: v = (rhat12, (c - rhat11) + i s), columns [Im v | Re v].
    Matrix2 v1{0.0, rhat.a12, s, c - rhat.a11};
    // Row 2: v = ((c - rhat22) + i s, rhat21).
    Matrix2 v2{s, c - rhat.a22, 0.0, rhat.a21};
    return std::abs(v1.det()) >= std::abs(v2.det()) ? v1 : v2;
}

}  // namespace

CanonicalPair reduce(const Matrix2& h, const Matrix2& r, const ReduceOptions& opts) {
    const Membership mh = classify_membership(h, opts.membership_tol);
    const Membership mr = classify_membership(r, opts.membership_tol);
    if (mh.cls != MatrixClass::InP)
        fail(errc::not_in_domain, "h is not a rank-one non-nilpotent matrix");
    if (mr.cls != MatrixClass::InE)
        fail(errc::not_in_domain, "r does not have non-real eigenvalues");

    CanonicalPair out;
    out.gamma = std::sqrt(r.det());  // det r > 0 is forced by non-real eigenvalues
    out.lambda = h.trace() / out.gamma;

    const double cth = std::clamp(r.trace() / (2.0 * out.gamma), -1.0, 1.0);
    out.theta = std::acos(cth);  // in (0, pi): sin(theta) > 0 by convention
    const double sth = std::sin(out.theta);
    if (sth < opts.sin_tol) fail(errc::degenerate, "r is proportional to +-identity");

    const double mixed = (h * r).trace() / (out.gamma * out.gamma);
    out.alpha = (mixed - out.lambda * cth) / sth;

    // Basis: first align r/gamma with rotation(theta), then rotate the
    // lambda-eigenvector of the transformed h onto the horizontal axis.
    const Matrix2 rhat = r * (1.0 / out.gamma);
    Matrix2 a1 = rotation_basis(rhat, cth, sth);
    const double d1 = a1.det();
    if (std::abs(d1) == 0.0) fail(errc::degenerate, "eigenvector construction degenerated");
    a1 = a1 * (1.0 / std::sqrt(std::abs(d1)));

    const Matrix2 hp = inverse(a1) * (h * (1.0 / out.gamma)) * a1;
    // (hp - lambda I) v = 0: take the larger row w, v = (-w2, w1) normalized.
    const Matrix2 m = hp - Matrix2::identity() * out.lambda;
    double w1, w2;
    if (m.a11 * m.a11 + m.a12 * m.a12 >= m.a21 * m.a21 + m.a22 * m.a22) {
        w1 = m.a11;
        w2 = m.a12;
    } else {
        w1 = m.a21;
        w2 = m.a22;
    }
    const double wn = std::hypot(w1, w2);
    if (wn == 0.0) fail(errc::degenerate, "h has no isolated eigendirection");
    const double v1 = -w2 / wn, v2 = w1 / wn;
    const Matrix2 b{v1, -v2, v2, v1};  // rotation taking e1 to v

    Matrix2 a = a1 * b;
    a = a * (1.0 / std::sqrt(std::abs(a.det())));
    // Sign normalization so the identity-conjugated case reports A = I.
    if (a.a11 < 0.0 || (a.a11 == 0.0 && a.a21 < 0.0)) a = a * -1.0;

    out.basis = a;
    out.basis_inv = inverse(a);

    const double cond = op_norm(out.basis) * op_norm(out.basis_inv);
    if (!(cond <= opts.max_condition))
        fail(errc::ill_conditioned, "basis condition number exceeds guard");

    return out;
}

std::pair<Matrix2, Matrix2> reconstruct(const CanonicalPair& c) {
    const Matrix2 hcan{c.lambda, c.alpha, 0.0, 0.0};
    const Matrix2 rcan = rotation(c.theta);
    const Matrix2 h = c.basis * hcan * c.basis_inv * c.gamma;
    const Matrix2 r = c.basis * rcan * c.basis_inv * c.gamma;
    return {h, r};
}

}  // namespace lsr
