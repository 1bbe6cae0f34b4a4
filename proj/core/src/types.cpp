#include "kmsa/types.hpp"

#include "kmsa/errors.hpp"

namespace kmsa {

MultiviewDataset MultiviewDataset::subset(const std::vector<Index>& idx) const {
  MultiviewDataset out;
  out.view_names = view_names;
  out.views.reserve(views.size());
  for (const Matrix& X : views) {
    Matrix sub(X.rows(), static_cast<Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (idx[j] < 0 || idx[j] >= X.cols()) {
        throw DimensionError("subset index " + std::to_string(idx[j]) +
                             " out of range");
      }
      sub.col(static_cast<Index>(j)) = X.col(idx[j]);
    }
    out.views.push_back(std::move(sub));
  }
  if (labels) {
    std::vector<int> l;
    l.reserve(idx.size());
    for (Index i : idx) l.push_back((*labels)[static_cast<std::size_t>(i)]);
    out.labels = std::move(l);
  }
  return out;
}

KernelSpec KernelSpec::gaussian(double sigma) {
  KernelSpec s;
  s.kind = KernelKind::kGaussian;
  s.bandwidth = sigma;
  return s;
}

KernelSpec KernelSpec::gaussian_median() {
  KernelSpec s;
  s.kind = KernelKind::kGaussian;
  return s;
}

KernelSpec KernelSpec::linear() {
  KernelSpec s;
  s.kind = KernelKind::kLinear;
  return s;
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
  KernelSpec s;
  s.kind = KernelKind::kPolynomial;
  s.degree = degree;
  s.offset = offset;
  return s;
}

GraphRecipe GraphRecipe::pca() { return GraphRecipe{}; }

GraphRecipe GraphRecipe::lpp(int neighbors, double heat) {
  GraphRecipe g;
  g.kind = GraphKind::kLpp;
  g.neighbors = neighbors;
  g.heat = heat;
  return g;
}

GraphRecipe GraphRecipe::lda() {
  GraphRecipe g;
  g.kind = GraphKind::kLda;
  return g;
}

GraphRecipe GraphRecipe::spp(double lambda, int max_iters) {
  GraphRecipe g;
  g.kind = GraphKind::kSpp;
  g.lambda = lambda;
  g.lasso_max_iters = max_iters;
  return g;
}

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kGaussian: return "gaussian";
    case KernelKind::kLinear: return "linear";
    case KernelKind::kPolynomial: return "polynomial";
  }
  return "unknown";
}

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::kPca: return "pca";
    case GraphKind::kLpp: return "lpp";
    case GraphKind::kLda: return "lda";
    case GraphKind::kSpp: return "spp";
  }
  return "unknown";
}

std::optional<GraphKind> parse_graph_kind(const std::string& name) {
  if (name == "pca") return GraphKind::kPca;
  if (name == "lpp") return GraphKind::kLpp;
  if (name == "lda") return GraphKind::kLda;
  if (name == "spp") return GraphKind::kSpp;
  return std::nullopt;
}

std::optional<KernelKind> parse_kernel_kind(const std::string& name) {
  if (name == "gaussian") return KernelKind::kGaussian;
  if (name == "linear") return KernelKind::kLinear;
  if (name == "polynomial") return KernelKind::kPolynomial;
  return std::nullopt;
}

const char* to_string(WeightDomain policy) {
  return policy == WeightDomain::kShift ? "shift" : "clamp";
}

std::optional<WeightDomain> parse_weight_domain(const std::string& name) {
  if (name == "shift") return WeightDomain::kShift;
  if (name == "clamp") return WeightDomain::kClamp;
  return std::nullopt;
}

const KernelSpec& KmsaConfig::kernel_for(int view) const {
  return kernel.size() == 1 ? kernel.front()
                            : kernel.at(static_cast<std::size_t>(view));
}

const GraphRecipe& KmsaConfig::graph_for(int view) const {
  return graph.size() == 1 ? graph.front()
                           : graph.at(static_cast<std::size_t>(view));
}

const char* to_string(FitWarning::Kind kind) {
  switch (kind) {
    case FitWarning::Kind::kNonMonotone: return "non_monotone";
    case FitWarning::Kind::kWeightClamp: return "weight_clamp";
    case FitWarning::Kind::kWeightShift: return "weight_shift";
    case FitWarning::Kind::kWeightRejected: return "weight_rejected";
    case FitWarning::Kind::kLassoNotConverged: return "lasso_not_converged";
  }
  return "unknown";
}

}  // namespace kmsa
