#include "kmsa/eigsolver.hpp"

#include "kmsa/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace kmsa {

void canonicalize_signs(Matrix& V) {
  for (Index j = 0; j < V.cols(); ++j) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < V.rows(); ++i) {
      const double a = std::abs(V(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (V(best, j) < 0.0) V.col(j) = -V.col(j);
  }
}

GeneralizedEigenResult generalized_eigh(const Matrix& H, const Matrix& M, int d) {
  const Index n = H.rows();
  if (H.cols() != n || M.rows() != n || M.cols() != n) {
    throw DimensionError("generalized_eigh: H and M must be square and equal size");
  }
  if (d < 1 || d > n) {
    throw DimensionError("generalized_eigh: need 1 <= d <= N");
  }
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericError("generalized_eigh: M is not positive definite");
  }
  const auto L = llt.matrixL();

  // C = L^-1 H L^-T
  Matrix C = L.solve(H);
  C = L.solve(C.transpose()).eval();
  C = 0.5 * (C + C.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(C);
  if (es.info() != Eigen::Success) {
    throw NumericError("generalized_eigh: symmetric eigensolver failed");
  }

  GeneralizedEigenResult out;
  out.values = es.eigenvalues().head(d);
  out.vectors = llt.matrixU().solve(es.eigenvectors().leftCols(d));
  canonicalize_signs(out.vectors);

  const double h_scale = H.norm() / std::sqrt(static_cast<double>(n));
  for (Index j = 0; j < d; ++j) {
    const double xi = out.values(j);
    const double resid =
        (H * out.vectors.col(j) - xi * (M * out.vectors.col(j))).norm();
    const double bound = 1e-6 * (1.0 + std::abs(xi)) * h_scale;
    if (!(resid <= bound) && resid > 1e-12) {
      throw NumericError("generalized_eigh: residual " + std::to_string(resid) +
                         " exceeds backward error bound for pair " +
                         std::to_string(j));
    }
  }
  return out;
}

}  // namespace kmsa
