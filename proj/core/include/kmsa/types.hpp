#ifndef KMSA_TYPES_HPP
#define KMSA_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kmsa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// m feature views over the same N samples. Each view is D_v x N, one
/// column per sample.
struct MultiviewDataset {
  std::vector<Matrix> views;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> view_names;  // empty or one per view

  int num_views() const { return static_cast<int>(views.size()); }
  Index num_samples() const { return views.empty() ? 0 : views.front().cols(); }
  bool has_labels() const { return labels.has_value(); }

  /// Columns `idx` of every view (and the matching labels).
  MultiviewDataset subset(const std::vector<Index>& idx) const;
};

enum class KernelKind { kGaussian, kLinear, kPolynomial };

struct KernelSpec {
  KernelKind kind = KernelKind::kGaussian;
  // Gaussian: k(x,y) = exp(-|x-y|^2 / (2 sigma^2)). Unset means the
  // median heuristic is applied to the view at build time.
  std::optional<double> bandwidth;
  // Polynomial: k(x,y) = (x.y + offset)^degree.
  int degree = 2;
  double offset = 1.0;

  static KernelSpec gaussian(double sigma);
  static KernelSpec gaussian_median();
  static KernelSpec linear();
  static KernelSpec polynomial(int degree, double offset);

  bool operator==(const KernelSpec&) const = default;
};

enum class GraphKind { kPca, kLpp, kLda, kSpp };

struct GraphRecipe {
  GraphKind kind = GraphKind::kPca;
  int neighbors = 5;        // lpp
  double heat = 1.0;        // lpp
  double lambda = 0.1;      // spp
  int lasso_max_iters = 1000;  // spp

  static GraphRecipe pca();
  static GraphRecipe lpp(int neighbors, double heat);
  static GraphRecipe lda();
  static GraphRecipe spp(double lambda, int max_iters = 1000);

  bool operator==(const GraphRecipe&) const = default;
};

/// How the weight update treats non-positive trace terms.
///  kShift: raise every term by 2 max_v |t_v| (an increase of kappa) so the
///          closed form applies and the trace ordering is kept.
///  kClamp: floor offending terms at 1e-12 max_v |t_v|.
enum class WeightDomain { kShift, kClamp };

const char* to_string(KernelKind kind);
const char* to_string(GraphKind kind);
std::optional<GraphKind> parse_graph_kind(const std::string& name);
std::optional<KernelKind> parse_kernel_kind(const std::string& name);
const char* to_string(WeightDomain policy);
std::optional<WeightDomain> parse_weight_domain(const std::string& name);

/// Hyperparameters of a fit. The defaults for r, kappa and eta are the
/// values used in the reference experiments.
struct KmsaConfig {
  int d = 2;
  double r = 3.0;
  double kappa = 0.1;
  double eta = -1.0;
  // One entry, applied to every view, or exactly one per view.
  std::vector<KernelSpec> kernel{KernelSpec::gaussian_median()};
  std::vector<GraphRecipe> graph{GraphRecipe::pca()};
  int max_iters = 30;
  double tol = 1e-6;
  double ridge = 1.0;  // multiple of tr(M)/N added to the constraint diagonal
  bool center_kernel = false;
  bool learn_weights = true;  // false keeps alpha fixed at 1/m
  WeightDomain weight_domain = WeightDomain::kShift;
  std::uint64_t seed = 0;

  const KernelSpec& kernel_for(int view) const;
  const GraphRecipe& graph_for(int view) const;

  bool operator==(const KmsaConfig&) const = default;
};

/// Per-view state of the optimization.
struct ViewState {
  KernelSpec kernel;  // bandwidth resolved
  Matrix K;           // N x N kernel matrix (centered if configured)
  Matrix P;           // E - S
  Matrix M;           // ridged constraint matrix
  Matrix KPK;         // K P K, cached
  Matrix U;           // N x d coefficients
  // Row means and grand mean of the uncentered kernel, needed to center
  // out-of-sample kernel columns consistently.
  Vector raw_row_means;
  double raw_grand_mean = 0.0;
};

struct FitWarning {
  enum class Kind {
    kNonMonotone,
    kWeightClamp,
    kWeightShift,
    kWeightRejected,
    kLassoNotConverged,
  };
  Kind kind;
  int iteration;  // sweep index, 0 for setup
  int view;       // -1 when not view specific
  std::string message;
};

const char* to_string(FitWarning::Kind kind);

struct KmsaModel {
  KmsaConfig config;
  std::vector<ViewState> states;
  Vector alpha;
  std::vector<double> objective_trace;  // entry 0 is the initialization
  std::vector<Matrix> embeddings;       // d x N per view
  std::vector<FitWarning> warnings;
  int iterations = 0;
  bool converged = false;
  MultiviewDataset training;  // needed for out-of-sample transforms

  int num_views() const { return static_cast<int>(states.size()); }
};

}  // namespace kmsa

#endif  // KMSA_TYPES_HPP
