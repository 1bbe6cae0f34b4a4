#include "kmsa/graphs.hpp"

#include "kmsa/errors.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace kmsa {

GraphPair pca_graph(Index n) {
  if (n < 2) throw GraphError("pca graph needs at least 2 samples");
  GraphPair g;
  g.S = Matrix::Constant(n, n, -1.0 / static_cast<double>(n));
  g.S.diagonal().setZero();
  g.B = Matrix::Identity(n, n);
  g.uses_kbk = false;
  return g;
}

namespace {

// Indices of the k nearest columns to column i (excluding i), ties by index.
std::vector<Index> nearest(const Matrix& D2, Index i, int k) {
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(D2.cols() - 1));
  for (Index j = 0; j < D2.cols(); ++j) {
    if (j != i) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return D2(i, a) < D2(i, b); });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

Matrix squared_distances(const Matrix& X) {
  const Index n = X.cols();
  Matrix D2(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) D2(i, j) = (X.col(i) - X.col(j)).squaredNorm();
  }
  return D2;
}

}  // namespace

GraphPair lpp_graph(const Matrix& X, int k, double t) {
  const Index n = X.cols();
  if (k < 1 || k >= n) throw GraphError("lpp requires 1 <= k < N");
  if (!(t > 0.0)) throw GraphError("lpp heat parameter must be positive");
  const Matrix D2 = squared_distances(X);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adj =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
  for (Index i = 0; i < n; ++i) {
    for (Index j : nearest(D2, i, k)) {
      adj(i, j) = true;
      adj(j, i) = true;
    }
  }
  GraphPair g;
  g.S = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i != j && adj(i, j)) g.S(i, j) = std::exp(-D2(i, j) / t);
    }
  }
  g.B = g.S.rowwise().sum().asDiagonal();
  g.uses_kbk = true;
  return g;
}

GraphPair lda_graph(const std::vector<int>& labels) {
  const Index n = static_cast<Index>(labels.size());
  if (n < 2) throw GraphError("lda graph needs at least 2 labeled samples");
  std::map<int, double> counts;
  for (int l : labels) counts[l] += 1.0;

  Matrix raw(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const int li = labels[static_cast<std::size_t>(i)];
      const double delta = li == labels[static_cast<std::size_t>(j)] ? 1.0 : -1.0;
      raw(i, j) = delta / counts[li];
    }
  }
  GraphPair g;
  g.S = 0.5 * (raw + raw.transpose());
  g.S.diagonal().setZero();
  g.B = Matrix::Identity(n, n) -
        Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  g.uses_kbk = true;
  return g;
}

namespace {

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

}  // namespace

LassoResult lasso_coordinate_descent(const Matrix& A, const Vector& y,
                                     double lambda, int max_iters, double tol,
                                     Index fixed_zero) {
  const Index p = A.cols();
  LassoResult res;
  res.coef = Vector::Zero(p);
  const Vector col_sq = A.colwise().squaredNorm().transpose();
  Vector resid = y;
  for (int it = 0; it < max_iters; ++it) {
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (j == fixed_zero || col_sq(j) == 0.0) continue;
      const double old = res.coef(j);
      const double rho = A.col(j).dot(resid) + col_sq(j) * old;
      const double next = soft_threshold(rho, lambda) / col_sq(j);
      if (next != old) {
        resid.noalias() -= (next - old) * A.col(j);
        res.coef(j) = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    res.iterations = it + 1;
    if (max_change < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

Matrix sparse_codes(const Matrix& X, double lambda, int max_iters,
                    std::vector<std::string>* warnings) {
  const Index n = X.cols();
  Matrix W = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    LassoResult r = lasso_coordinate_descent(X, X.col(i), lambda, max_iters,
                                             1e-6, /*fixed_zero=*/i);
    if (!r.converged && warnings) {
      warnings->push_back("lasso for sample " + std::to_string(i) +
                          " stopped at max_iters=" + std::to_string(max_iters) +
                          " without reaching 1e-6 coefficient change");
    }
    W.col(i) = r.coef;
  }
  return W;
}

GraphPair spp_graph(const Matrix& X, double lambda, int max_iters) {
  const Index n = X.cols();
  if (n < 2) throw GraphError("spp graph needs at least 2 samples");
  if (!(lambda > 0.0)) throw GraphError("spp lambda must be positive");
  GraphPair g;
  const Matrix W = sparse_codes(X, lambda, max_iters, &g.warnings);
  g.S = W + W.transpose() + W.transpose() * W;
  g.S = 0.5 * (g.S + g.S.transpose()).eval();
  g.S.diagonal().setZero();
  g.B = Matrix::Identity(n, n);
  g.uses_kbk = false;
  return g;
}

Matrix laplacian(const Matrix& S) {
  Matrix P = -S;
  for (Index i = 0; i < S.rows(); ++i) {
    P(i, i) = S.row(i).sum() - S(i, i) - S(i, i);
  }
  return P;
}

Matrix constraint_matrix(const Matrix& K, const GraphPair& pair, double ridge) {
  const Index n = K.rows();
  Matrix M = pair.uses_kbk ? Matrix(K * pair.B * K) : K;
  if (ridge > 0.0) {
    M.diagonal().array() += ridge * M.trace() / static_cast<double>(n);
  }
  M = 0.5 * (M + M.transpose()).eval();
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericError(
        "constraint matrix is not positive definite; increase ridge");
  }
  return M;
}

GraphPair build_graph(const GraphRecipe& recipe, const Matrix& X,
                      const std::vector<int>* labels) {
  switch (recipe.kind) {
    case GraphKind::kPca:
      return pca_graph(X.cols());
    case GraphKind::kLpp:
      return lpp_graph(X, recipe.neighbors, recipe.heat);
    case GraphKind::kLda:
      if (!labels) throw GraphError("lda recipe requires labels");
      return lda_graph(*labels);
    case GraphKind::kSpp:
      return spp_graph(X, recipe.lambda, recipe.lasso_max_iters);
  }
  throw GraphError("unknown graph recipe");
}

}  // namespace kmsa
