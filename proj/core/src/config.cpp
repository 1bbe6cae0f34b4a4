#include "kmsa/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace kmsa {

const char* to_string(ConfigReason reason) {
  switch (reason) {
    case ConfigReason::kNoViews: return "no_views";
    case ConfigReason::kTooFewSamples: return "too_few_samples";
    case ConfigReason::kSampleCountMismatch: return "sample_count_mismatch";
    case ConfigReason::kEmptyView: return "empty_view";
    case ConfigReason::kNonFiniteFeature: return "non_finite_feature";
    case ConfigReason::kLabelCountMismatch: return "label_count_mismatch";
    case ConfigReason::kViewNameCountMismatch: return "view_name_count_mismatch";
    case ConfigReason::kDimensionNotPositive: return "dimension_not_positive";
    case ConfigReason::kDimensionExceedsSamples:
      return "dimension_exceeds_samples";
    case ConfigReason::kExponentTooSmall: return "exponent_too_small";
    case ConfigReason::kKappaNegative: return "kappa_negative";
    case ConfigReason::kEtaNotNegative: return "eta_not_negative";
    case ConfigReason::kMaxItersNegative: return "max_iters_negative";
    case ConfigReason::kTolNotPositive: return "tol_not_positive";
    case ConfigReason::kRidgeNegative: return "ridge_negative";
    case ConfigReason::kKernelCountMismatch: return "kernel_count_mismatch";
    case ConfigReason::kBandwidthNotPositive: return "bandwidth_not_positive";
    case ConfigReason::kPolyDegreeInvalid: return "poly_degree_invalid";
    case ConfigReason::kPolyOffsetNegative: return "poly_offset_negative";
    case ConfigReason::kGraphCountMismatch: return "graph_count_mismatch";
    case ConfigReason::kLppNeighborsInvalid: return "lpp_neighbors_invalid";
    case ConfigReason::kLppHeatNotPositive: return "lpp_heat_not_positive";
    case ConfigReason::kLdaRequiresLabels: return "lda_requires_labels";
    case ConfigReason::kSppLambdaNotPositive: return "spp_lambda_not_positive";
    case ConfigReason::kSppItersNotPositive: return "spp_iters_not_positive";
  }
  return "unknown";
}

namespace {

std::string join_messages(const std::vector<ConfigViolation>& v) {
  std::ostringstream os;
  os << "invalid configuration: ";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << v[i].message << " [" << to_string(v[i].reason) << "]";
  }
  return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigViolation> violations)
    : Error(ErrorKind::kConfig, join_messages(violations)),
      violations_(std::move(violations)) {}

bool ConfigError::has(ConfigReason reason) const noexcept {
  return std::any_of(violations_.begin(), violations_.end(),
                     [&](const ConfigViolation& v) { return v.reason == reason; });
}

std::vector<ConfigViolation> dataset_violations(const MultiviewDataset& data) {
  std::vector<ConfigViolation> out;
  auto add = [&](ConfigReason r, std::string msg) {
    out.push_back({r, std::move(msg)});
  };
  if (data.views.empty()) {
    add(ConfigReason::kNoViews, "dataset must have at least one view");
    return out;
  }
  const Index n = data.views.front().cols();
  if (n < 2) add(ConfigReason::kTooFewSamples, "dataset needs at least 2 samples");
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    const Matrix& X = data.views[v];
    if (X.cols() != n) {
      add(ConfigReason::kSampleCountMismatch,
          "view " + std::to_string(v) + " has " + std::to_string(X.cols()) +
              " samples, expected " + std::to_string(n));
    }
    if (X.rows() < 1) {
      add(ConfigReason::kEmptyView,
          "view " + std::to_string(v) + " has no features");
    }
    if (!X.allFinite()) {
      add(ConfigReason::kNonFiniteFeature,
          "view " + std::to_string(v) + " contains non-finite values");
    }
  }
  if (data.labels && static_cast<Index>(data.labels->size()) != n) {
    add(ConfigReason::kLabelCountMismatch,
        "labels has " + std::to_string(data.labels->size()) +
            " entries, expected " + std::to_string(n));
  }
  if (!data.view_names.empty() && data.view_names.size() != data.views.size()) {
    add(ConfigReason::kViewNameCountMismatch,
        "view_names must be empty or one per view");
  }
  return out;
}

std::vector<ConfigViolation> config_violations(const KmsaConfig& cfg,
                                               const MultiviewDataset& data) {
  std::vector<ConfigViolation> out = dataset_violations(data);
  auto add = [&](ConfigReason r, std::string msg) {
    out.push_back({r, std::move(msg)});
  };
  const Index n = data.num_samples();
  const std::size_t m = data.views.size();

  if (cfg.d < 1) add(ConfigReason::kDimensionNotPositive, "d must be positive");
  if (!data.views.empty() && cfg.d > n) {
    add(ConfigReason::kDimensionExceedsSamples,
        "d must not exceed the sample count " + std::to_string(n));
  }
  if (!(cfg.r > 1.0)) add(ConfigReason::kExponentTooSmall, "r must exceed 1");
  if (!(cfg.kappa >= 0.0)) {
    add(ConfigReason::kKappaNegative, "kappa must be non-negative");
  }
  if (!(cfg.eta < 0.0)) add(ConfigReason::kEtaNotNegative, "eta must be negative");
  if (cfg.max_iters < 0) {
    add(ConfigReason::kMaxItersNegative, "max_iters must be non-negative");
  }
  if (!(cfg.tol > 0.0)) add(ConfigReason::kTolNotPositive, "tol must be positive");
  if (!(cfg.ridge >= 0.0)) {
    add(ConfigReason::kRidgeNegative, "ridge must be non-negative");
  }

  if (cfg.kernel.size() != 1 && cfg.kernel.size() != m) {
    add(ConfigReason::kKernelCountMismatch,
        "kernel list must have 1 or " + std::to_string(m) + " entries");
  } else {
    for (const KernelSpec& k : cfg.kernel) {
      if (k.kind == KernelKind::kGaussian && k.bandwidth && !(*k.bandwidth > 0.0)) {
        add(ConfigReason::kBandwidthNotPositive,
            "gaussian bandwidth must be positive");
      }
      if (k.kind == KernelKind::kPolynomial) {
        if (k.degree < 1) {
          add(ConfigReason::kPolyDegreeInvalid, "polynomial degree must be >= 1");
        }
        if (!(k.offset >= 0.0)) {
          add(ConfigReason::kPolyOffsetNegative,
              "polynomial offset must be non-negative");
        }
      }
    }
  }

  if (cfg.graph.size() != 1 && cfg.graph.size() != m) {
    add(ConfigReason::kGraphCountMismatch,
        "graph list must have 1 or " + std::to_string(m) + " entries");
  } else {
    for (const GraphRecipe& g : cfg.graph) {
      switch (g.kind) {
        case GraphKind::kPca:
          break;
        case GraphKind::kLpp:
          if (g.neighbors < 1 || g.neighbors >= n) {
            add(ConfigReason::kLppNeighborsInvalid,
                "lpp neighbors must satisfy 1 <= k < N");
          }
          if (!(g.heat > 0.0)) {
            add(ConfigReason::kLppHeatNotPositive, "lpp heat must be positive");
          }
          break;
        case GraphKind::kLda:
          if (!data.labels) {
            add(ConfigReason::kLdaRequiresLabels, "lda recipe requires labels");
          }
          break;
        case GraphKind::kSpp:
          if (!(g.lambda > 0.0)) {
            add(ConfigReason::kSppLambdaNotPositive, "spp lambda must be positive");
          }
          if (g.lasso_max_iters < 1) {
            add(ConfigReason::kSppItersNotPositive,
                "spp lasso iterations must be positive");
          }
          break;
      }
    }
  }
  return out;
}

void validate_dataset(const MultiviewDataset& data) {
  auto v = dataset_violations(data);
  if (!v.empty()) throw ConfigError(std::move(v));
}

void validate_config(const KmsaConfig& cfg, const MultiviewDataset& data) {
  auto v = config_violations(cfg, data);
  if (!v.empty()) throw ConfigError(std::move(v));
}

}  // namespace kmsa
