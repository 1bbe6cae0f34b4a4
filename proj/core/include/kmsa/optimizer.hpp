#ifndef KMSA_OPTIMIZER_HPP
#define KMSA_OPTIMIZER_HPP

#include "kmsa/types.hpp"

#include <span>
#include <vector>

namespace kmsa {

/// Mutable state of the alternating minimization.
struct OptState {
  std::vector<ViewState> states;
  Vector alpha;  // open simplex
  int iter = 0;
  std::vector<double> objective_trace;
};

/// The three parts of the overall objective
///
///   G = sum_v a_v^r tr(U_v^T K_v P_v K_v U_v)
///     + kappa sum_v a_v^r
///     + sum_{v<w} (a_v^r + a_w^r) / (2 eta) tr(U_v^T U_w U_w^T U_v).
///
/// The pairwise term runs over unordered pairs; it is the form whose
/// per-view restriction is exactly tr(U_v^T H_v U_v) and whose alpha
/// derivative yields the closed-form weight update.
struct ObjectiveTerms {
  double subspace = 0.0;
  double regularizer = 0.0;
  double coregularizer = 0.0;
  double total() const { return subspace + regularizer + coregularizer; }
};

/// tr(U_v^T U_w U_w^T U_v) = |U_v^T U_w|_F^2.
double coupling_trace(const Matrix& Uv, const Matrix& Uw);

/// Normalized Frobenius divergence between the Gram matrices U_i^T U_i and
/// U_j^T U_j, each scaled by its squared Frobenius norm. Diagnostic only.
double view_divergence(const Matrix& Ui, const Matrix& Uj);

ObjectiveTerms objective_terms(const OptState& state, const KmsaConfig& cfg);
double objective(const OptState& state, const KmsaConfig& cfg);

/// H_v = K_v P_v K_v + sum_{w != v} (1 + (a_w/a_v)^r) / (2 eta) U_w U_w^T.
Matrix build_h(const OptState& state, int v, const KmsaConfig& cfg);

/// d smallest generalized eigenvectors of (H_v, M_v).
Matrix update_view(const OptState& state, int v, const KmsaConfig& cfg);

/// Per-view coefficient of a_v^r in G with every U fixed:
/// tr(U_v^T K_v P_v K_v U_v) + kappa + sum_{w != v} tr(U_v^T U_w U_w^T U_v) / (2 eta).
Vector weight_trace_terms(const OptState& state, const KmsaConfig& cfg);

/// a_v proportional to (1 / t_v)^(1 / (r - 1)), normalized to sum to 1.
/// Evaluated as (t_min / t_v)^(1/(r-1)) so that a common positive scale of
/// the traces cancels. Throws WeightDomainError on a non-positive trace.
Vector weights_from_traces(std::span<const double> traces, double r);

struct WeightUpdate {
  Vector alpha;
  Vector traces;             // as computed, before any adjustment
  double shift = 0.0;        // added to every trace (kShift policy)
  std::vector<int> clamped;  // views whose trace was floored (kClamp policy)
};

/// Closed-form weight update. When some trace is not positive the
/// configured WeightDomain policy decides how the terms are adjusted.
WeightUpdate update_weights(const OptState& state, const KmsaConfig& cfg);

/// Builds K, P, M for one view and the uncoupled initial U.
ViewState prepare_view(const Matrix& X, const KernelSpec& kernel,
                       const GraphRecipe& recipe, const std::vector<int>* labels,
                       const KmsaConfig& cfg,
                       std::vector<std::string>* warnings = nullptr);

/// Prepared views, uniform weights, objective at the initialization.
OptState initialize(const MultiviewDataset& data, const KmsaConfig& cfg,
                    std::vector<FitWarning>* warnings = nullptr);

/// Alternating minimization: Gauss-Seidel sweep over the views, then the
/// weight update; the objective is recorded once per sweep.
KmsaModel fit(const MultiviewDataset& data, const KmsaConfig& cfg);

/// Y_v = U_v^T K_v.
Matrix embed(const ViewState& state);

/// Embeds new samples (one D_v x Q matrix per view) against `training`.
std::vector<Matrix> transform(const KmsaModel& model,
                              const std::vector<Matrix>& new_points,
                              const MultiviewDataset& training);

/// Same, using the training data stored in the model.
std::vector<Matrix> transform(const KmsaModel& model,
                              const std::vector<Matrix>& new_points);

}  // namespace kmsa

#endif  // KMSA_OPTIMIZER_HPP
