#ifndef KMSA_GRAPHS_HPP
#define KMSA_GRAPHS_HPP

#include "kmsa/types.hpp"

#include <string>
#include <vector>

namespace kmsa {

/// Similarity matrix S and constraint form B of one graph recipe.
/// S always has a zero diagonal.
struct GraphPair {
  Matrix S;
  Matrix B;
  bool uses_kbk = false;  // true: M = K B K, false: M = K
  std::vector<std::string> warnings;
};

/// S_ij = -1/N off the diagonal. Minimizing under this graph maximizes
/// variance.
GraphPair pca_graph(Index n);

/// Heat-kernel weights exp(-|x_i - x_j|^2 / t) on the symmetric k-nearest
/// neighbor graph (i in kNN(j) or j in kNN(i)); B is the degree matrix.
/// Neighbor ties go to the lower index.
GraphPair lpp_graph(const Matrix& X, int k, double t);

/// S_ij = +-1/n_{l_i} (same class / different class), symmetrized;
/// B = I - (1/N) 1 1^T. Label ids are arbitrary integers.
GraphPair lda_graph(const std::vector<int>& labels);

struct LassoResult {
  Vector coef;
  int iterations = 0;
  bool converged = false;
};

/// min_c 1/2 |y - A c|^2 + lambda |c|_1 by cyclic coordinate descent,
/// stopping when the largest coefficient change in a sweep is below `tol`.
/// `fixed_zero` (if >= 0) pins that coordinate to 0.
LassoResult lasso_coordinate_descent(const Matrix& A, const Vector& y,
                                     double lambda, int max_iters,
                                     double tol = 1e-6, Index fixed_zero = -1);

/// Sparse reconstruction matrix W (column i codes x_i over the other
/// samples) as used by the spp recipe.
Matrix sparse_codes(const Matrix& X, double lambda, int max_iters,
                    std::vector<std::string>* warnings = nullptr);

/// S = W + W^T + W^T W with zeroed diagonal; B = I.
GraphPair spp_graph(const Matrix& X, double lambda, int max_iters);

/// P = E - S with E_ii = sum_{j != i} S_ij.
Matrix laplacian(const Matrix& S);

/// M = K B K or K, plus ridge * (trace(M) / N) * I. Throws NumericError if
/// the result is not positive definite.
Matrix constraint_matrix(const Matrix& K, const GraphPair& pair, double ridge);

/// Dispatch on the recipe. `labels` is required for lda.
GraphPair build_graph(const GraphRecipe& recipe, const Matrix& X,
                      const std::vector<int>* labels);

}  // namespace kmsa

#endif  // KMSA_GRAPHS_HPP
