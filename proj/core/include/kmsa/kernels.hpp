#ifndef KMSA_KERNELS_HPP
#define KMSA_KERNELS_HPP

#include "kmsa/types.hpp"

namespace kmsa {

/// Median of the pairwise Euclidean distances between columns of X over
/// all i < j. Returns 1 when the median is 0.
double median_heuristic_bandwidth(const Matrix& X);

/// Copy of `spec` with a concrete Gaussian bandwidth for data X.
KernelSpec resolve_kernel(const KernelSpec& spec, const Matrix& X);

/// Kernel values k(a_i, b_j) between the columns of A and B. The spec must
/// be resolved. Throws NumericError on non-finite entries.
Matrix cross_kernel(const Matrix& A, const Matrix& B, const KernelSpec& spec);

/// N x N kernel matrix of the columns of X, symmetrized as (K + K^T) / 2.
/// With `center`, returns H K H where H = I - (1/N) 1 1^T.
Matrix build_kernel(const Matrix& X, const KernelSpec& spec, bool center);

/// H K H for the centering matrix H.
Matrix center_kernel(const Matrix& K);

/// Centers kernel columns of new points against a training kernel whose
/// uncentered row means and grand mean are given.
Matrix center_cross_kernel(const Matrix& k_new, const Vector& train_row_means,
                           double train_grand_mean);

}  // namespace kmsa

#endif  // KMSA_KERNELS_HPP
