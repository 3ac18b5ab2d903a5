#pragma once

#include <array>
#include <cmath>
#include <iosfwd>

#include "lsr/errors.hpp"

namespace lsr {

// 2x2 real matrix with closed-form spectral data. All entries must be finite;
// constructors reject NaN/Inf so downstream formulas never see them.
struct Matrix2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    Matrix2() = default;
    Matrix2(double m11, double m12, double m21, double m22);

    static Matrix2 identity() { return {1, 0, 0, 1}; }
    static Matrix2 zero() { return {0, 0, 0, 0}; }

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    Matrix2 transpose() const { return {a11, a21, a12, a22}; }

    Matrix2 operator*(const Matrix2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Matrix2 operator+(const Matrix2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Matrix2 operator-(const Matrix2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Matrix2 operator*(double c) const { return {c * a11, c * a12, c * a21, c * a22}; }

    std::array<double, 4> flat() const { return {a11, a12, a21, a22}; }
};

inline Matrix2 operator*(double c, const Matrix2& m) { return m * c; }

std::ostream& operator<<(std::ostream& os, const Matrix2& m);

// max |eigenvalue|, from the roots of x^2 - tr x + det.
double spectral_radius(const Matrix2& m);

// Largest singular value, closed form from the eigenvalues of m^T m.
double op_norm(const Matrix2& m);

double frobenius_norm(const Matrix2& m);

// [[cos t, -sin t], [sin t, cos t]]
Matrix2 rotation(double theta);

// Plain inverse; throws errc::degenerate when |det| is zero.
Matrix2 inverse(const Matrix2& m);

Matrix2 matrix_power(const Matrix2& m, long n);

// Membership in the two matrix classes the library works over:
// InP = rank one and not nilpotent, InE = non-real eigenvalues.
enum class MatrixClass { InP, InE, Neither };

struct Membership {
    MatrixClass cls = MatrixClass::Neither;
    bool borderline = false;  // |det|, |tr| or the discriminant sits inside the tolerance band
};

const char* matrix_class_name(MatrixClass c);

// InP iff det == 0 (within tol) and tr != 0 (beyond tol);
// InE iff tr^2 - 4 det < -tol. Ambiguous inputs come back Neither + borderline.
Membership classify_membership(const Matrix2& m, double tol = 1e-9);

}  // namespace lsr
