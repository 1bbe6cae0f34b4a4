#ifndef KMSA_EIGSOLVER_HPP
#define KMSA_EIGSOLVER_HPP

#include "kmsa/types.hpp"

namespace kmsa {

struct GeneralizedEigenResult {
  Vector values;   // d smallest, ascending
  Matrix vectors;  // N x d, V^T M V = I
};

/// Smallest d eigenpairs of the symmetric-definite pencil H v = xi M v.
///
/// M is Cholesky factored (M = L L^T), the pencil is reduced to the standard
/// symmetric problem L^-1 H L^-T, and the eigenvectors are mapped back with
/// L^-T. Each returned vector is signed so that its entry of largest
/// magnitude is positive (lowest index on ties).
///
/// Throws NumericError when M is not positive definite or when a returned
/// pair violates |H v - xi M v| <= 1e-6 (1 + |xi|) |H|_F / sqrt(N).
GeneralizedEigenResult generalized_eigh(const Matrix& H, const Matrix& M, int d);

/// Flips column signs in place so the largest-magnitude entry is positive.
void canonicalize_signs(Matrix& V);

}  // namespace kmsa

#endif  // KMSA_EIGSOLVER_HPP
