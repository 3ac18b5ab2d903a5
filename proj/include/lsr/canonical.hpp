#pragma once

#include <utility>

#include "lsr/mat2.hpp"

namespace lsr {

// Normal form of a pair (H, R) with H rank-one non-nilpotent and R having
// non-real eigenvalues: after dividing by gamma, the pair is simultaneously
// similar to ( [[lambda, alpha], [0, 0]], rotation(theta) ).
//
// Convention: theta is taken in (0, pi), i.e. sin(theta) > 0. The reflected
// representative (-theta, -alpha) describes the same pair; fixing the sign
// makes (gamma, lambda, alpha, theta) unique and golden tests deterministic.
struct CanonicalPair {
    double gamma = 1;   // > 0
    double lambda = 1;  // != 0
    double alpha = 0;
    double theta = 0;  // in (0, pi)
    Matrix2 basis = Matrix2::identity();      // A: original = gamma * A * canonical * A^-1
    Matrix2 basis_inv = Matrix2::identity();  // A^-1
};

struct ReduceOptions {
    double membership_tol = 1e-9;
    double sin_tol = 1e-9;            // guard against r ~ +-identity
    double max_condition = 1e8;       // reject bases worse than this
};

// Extracts (gamma, lambda, alpha, theta) by trace identities
//   gamma = sqrt(det r), lambda = tr(h)/gamma,
//   cos theta = tr(r)/(2 gamma), tr(h r)/gamma^2 = lambda cos theta + alpha sin theta,
// and builds the change of basis A from the eigenvector construction.
// Throws: not_in_domain (pair outside its classes), degenerate (sin theta ~ 0),
// ill_conditioned (basis condition number beyond the guard).
CanonicalPair reduce(const Matrix2& h, const Matrix2& r, const ReduceOptions& opts = {});

// Inverse map: (gamma A [[lambda, alpha],[0,0]] A^-1, gamma A rot(theta) A^-1).
std::pair<Matrix2, Matrix2> reconstruct(const CanonicalPair& c);

}  // namespace lsr
