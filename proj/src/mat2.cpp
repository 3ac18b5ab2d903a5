#include "lsr/mat2.hpp"

#include <cmath>
#include <ostream>

namespace lsr {

Matrix2::Matrix2(double m11, double m12, double m21, double m22)
    : a11(m11), a12(m12), a21(m21), a22(m22) {
    if (!(std::isfinite(m11) && std::isfinite(m12) && std::isfinite(m21) && std::isfinite(m22)))
        fail(errc::not_in_domain, "matrix entries must be finite");
}

std::ostream& operator<<(std::ostream& os, const Matrix2& m) {
    return os << "[[" << m.a11 << ", " << m.a12 << "], [" << m.a21 << ", " << m.a22 << "]]";
}

double spectral_radius(const Matrix2& m) {
    const double tr = m.trace();
    const double d = m.det();
    const double disc = tr * tr - 4.0 * d;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return std::max(std::abs(tr + s), std::abs(tr - s)) / 2.0;
    }
    // Complex pair: both eigenvalues have modulus sqrt(det), det > 0 here.
    return std::sqrt(d);
}

double op_norm(const Matrix2& m) {
    // Largest eigenvalue of m^T m = [[a, b], [b, c]].
    const double a = m.a11 * m.a11 + m.a21 * m.a21;
    const double c = m.a12 * m.a12 + m.a22 * m.a22;
    const double b = m.a11 * m.a12 + m.a21 * m.a22;
    const double mid = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    return std::sqrt(std::max(0.0, mid + rad));
}

double frobenius_norm(const Matrix2& m) {
    return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22);
}

Matrix2 rotation(double theta) {
    if (!std::isfinite(theta)) fail(errc::not_in_domain, "rotation angle must be finite");
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
}

Matrix2 inverse(const Matrix2& m) {
    const double d = m.det();
    if (d == 0.0) fail(errc::degenerate, "matrix is singular");
    return {m.a22 / d, -m.a12 / d, -m.a21 / d, m.a11 / d};
}

Matrix2 matrix_power(const Matrix2& m, long n) {
    if (n < 0) fail(errc::not_in_domain, "negative matrix power");
    Matrix2 acc = Matrix2::identity();
    Matrix2 base = m;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

const char* matrix_class_name(MatrixClass c) {
    switch (c) {
        case MatrixClass::InP: return "InP";
        case MatrixClass::InE: return "InE";
        case MatrixClass::Neither: return "Neither";
    }
    return "Neither";
}

Membership classify_membership(const Matrix2& m, double tol) {
    const double d = m.det();
    const double tr = m.trace();
    const double disc = tr * tr - 4.0 * d;
    if (std::abs(d) <= tol) {
        if (std::abs(tr) > tol) return {MatrixClass::InP, false};
        return {MatrixClass::Neither, true};  // nilpotent up to tolerance
    }
    if (disc < -tol) return {MatrixClass::InE, false};
    return {MatrixClass::Neither, std::abs(disc) <= tol};
}

}  // namespace lsr
