#include "kmsa/kernels.hpp"

#include "kmsa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kmsa {

double median_heuristic_bandwidth(const Matrix& X) {
  const Index n = X.cols();
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      dist.push_back((X.col(i) - X.col(j)).norm());
    }
  }
  if (dist.empty()) return 1.0;
  std::sort(dist.begin(), dist.end());
  const std::size_t mid = dist.size() / 2;
  const double median = dist.size() % 2 == 1
                            ? dist[mid]
                            : 0.5 * (dist[mid - 1] + dist[mid]);
  return median > 0.0 ? median : 1.0;
}

KernelSpec resolve_kernel(const KernelSpec& spec, const Matrix& X) {
  KernelSpec out = spec;
  if (out.kind == KernelKind::kGaussian && !out.bandwidth) {
    out.bandwidth = median_heuristic_bandwidth(X);
  }
  return out;
}

Matrix cross_kernel(const Matrix& A, const Matrix& B, const KernelSpec& spec) {
  if (A.rows() != B.rows()) {
    throw DimensionError("kernel operands have " + std::to_string(A.rows()) +
                         " and " + std::to_string(B.rows()) + " features");
  }
  Matrix G = A.transpose() * B;
  switch (spec.kind) {
    case KernelKind::kLinear:
      break;
    case KernelKind::kPolynomial:
      G = (G.array() + spec.offset).pow(spec.degree).matrix();
      break;
    case KernelKind::kGaussian: {
      if (!spec.bandwidth) {
        throw NumericError("gaussian kernel bandwidth is unresolved");
      }
      const double sigma = *spec.bandwidth;
      const double scale = -1.0 / (2.0 * sigma * sigma);
      for (Index j = 0; j < B.cols(); ++j) {
        for (Index i = 0; i < A.cols(); ++i) {
          G(i, j) = std::exp(scale * (A.col(i) - B.col(j)).squaredNorm());
        }
      }
      break;
    }
  }
  if (!G.allFinite()) {
    throw NumericError(std::string("non-finite entry in ") +
                       to_string(spec.kind) + " kernel");
  }
  return G;
}

Matrix center_kernel(const Matrix& K) {
  const Vector row_means = K.rowwise().mean();
  const Vector col_means = K.colwise().mean().transpose();
  const double grand = K.mean();
  Matrix C = K;
  C.colwise() -= row_means;
  C.rowwise() -= col_means.transpose();
  C.array() += grand;
  return 0.5 * (C + C.transpose());
}

Matrix center_cross_kernel(const Matrix& k_new, const Vector& train_row_means,
                           double train_grand_mean) {
  // (H k_new) - (H K 1/N) for each new column.
  Matrix C = k_new;
  const Vector col_means = k_new.colwise().mean().transpose();
  C.colwise() -= train_row_means;
  C.rowwise() -= col_means.transpose();
  C.array() += train_grand_mean;
  return C;
}

Matrix build_kernel(const Matrix& X, const KernelSpec& spec, bool center) {
  const KernelSpec resolved = resolve_kernel(spec, X);
  Matrix K = cross_kernel(X, X, resolved);
  K = 0.5 * (K + K.transpose()).eval();
  if (center) K = center_kernel(K);
  return K;
}

}  // namespace kmsa
