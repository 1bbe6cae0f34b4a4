#include "kmsa/optimizer.hpp"

#include "kmsa/config.hpp"
#include "kmsa/eigsolver.hpp"
#include "kmsa/errors.hpp"
#include "kmsa/graphs.hpp"
#include "kmsa/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kmsa {

double coupling_trace(const Matrix& Uv, const Matrix& Uw) {
  return (Uv.transpose() * Uw).squaredNorm();
}

double view_divergence(const Matrix& Ui, const Matrix& Uj) {
  const Matrix Li = Ui.transpose() * Ui;
  const Matrix Lj = Uj.transpose() * Uj;
  const double ni = Li.squaredNorm();
  const double nj = Lj.squaredNorm();
  if (ni == 0.0 || nj == 0.0) {
    throw NumericError("view_divergence: zero coefficient matrix");
  }
  return (Li / ni - Lj / nj).squaredNorm();
}

ObjectiveTerms objective_terms(const OptState& state, const KmsaConfig& cfg) {
  const int m = static_cast<int>(state.states.size());
  ObjectiveTerms t;
  for (int v = 0; v < m; ++v) {
    const ViewState& s = state.states[static_cast<std::size_t>(v)];
    const double av = std::pow(state.alpha(v), cfg.r);
    t.subspace += av * (s.U.transpose() * s.KPK * s.U).trace();
    t.regularizer += cfg.kappa * av;
  }
  for (int v = 0; v < m; ++v) {
    for (int w = v + 1; w < m; ++w) {
      const double coef = (std::pow(state.alpha(v), cfg.r) +
                           std::pow(state.alpha(w), cfg.r)) /
                          (2.0 * cfg.eta);
      t.coregularizer += coef * coupling_trace(state.states[v].U,
                                               state.states[w].U);
    }
  }
  return t;
}

double objective(const OptState& state, const KmsaConfig& cfg) {
  return objective_terms(state, cfg).total();
}

Matrix build_h(const OptState& state, int v, const KmsaConfig& cfg) {
  const double av = state.alpha(v);
  if (!(av > 0.0)) {
    throw NumericError("build_h: weight of view " + std::to_string(v) +
                       " is not positive");
  }
  const ViewState& sv = state.states[static_cast<std::size_t>(v)];
  Matrix H = sv.KPK;
  for (int w = 0; w < static_cast<int>(state.states.size()); ++w) {
    if (w == v) continue;
    const double coef =
        (1.0 + std::pow(state.alpha(w) / av, cfg.r)) / (2.0 * cfg.eta);
    const Matrix& Uw = state.states[static_cast<std::size_t>(w)].U;
    H.noalias() += coef * (Uw * Uw.transpose());
  }
  return 0.5 * (H + H.transpose());
}

Matrix update_view(const OptState& state, int v, const KmsaConfig& cfg) {
  const Matrix H = build_h(state, v, cfg);
  return generalized_eigh(H, state.states[static_cast<std::size_t>(v)].M, cfg.d)
      .vectors;
}

Vector weight_trace_terms(const OptState& state, const KmsaConfig& cfg) {
  const int m = static_cast<int>(state.states.size());
  Vector t(m);
  for (int v = 0; v < m; ++v) {
    const ViewState& sv = state.states[static_cast<std::size_t>(v)];
    double tv = (sv.U.transpose() * sv.KPK * sv.U).trace() + cfg.kappa;
    for (int w = 0; w < m; ++w) {
      if (w == v) continue;
      tv += coupling_trace(sv.U, state.states[static_cast<std::size_t>(w)].U) /
            (2.0 * cfg.eta);
    }
    t(v) = tv;
  }
  return t;
}

Vector weights_from_traces(std::span<const double> traces, double r) {
  if (traces.empty()) throw WeightDomainError("no trace terms");
  for (std::size_t v = 0; v < traces.size(); ++v) {
    if (!(traces[v] > 0.0) || !std::isfinite(traces[v])) {
      throw WeightDomainError("trace term of view " + std::to_string(v) +
                              " is not positive");
    }
  }
  const double t_min = *std::min_element(traces.begin(), traces.end());
  const double exponent = 1.0 / (r - 1.0);
  Vector a(static_cast<Index>(traces.size()));
  for (std::size_t v = 0; v < traces.size(); ++v) {
    a(static_cast<Index>(v)) = std::pow(t_min / traces[v], exponent);
  }
  return a / a.sum();
}

WeightUpdate update_weights(const OptState& state, const KmsaConfig& cfg) {
  WeightUpdate out;
  out.traces = weight_trace_terms(state, cfg);
  Vector t = out.traces;
  const double scale = t.cwiseAbs().maxCoeff();
  if (!(t.minCoeff() > 0.0)) {
    if (cfg.weight_domain == WeightDomain::kShift) {
      out.shift = scale > 0.0 ? 2.0 * scale : 1.0;
      t.array() += out.shift;
    } else {
      const double floor = 1e-12 * scale;
      for (Index v = 0; v < t.size(); ++v) {
        if (!(t(v) > floor)) {
          out.clamped.push_back(static_cast<int>(v));
          t(v) = floor > 0.0 ? floor : 1.0;
        }
      }
    }
  }
  out.alpha = weights_from_traces({t.data(), static_cast<std::size_t>(t.size())},
                                  cfg.r);
  return out;
}

ViewState prepare_view(const Matrix& X, const KernelSpec& kernel,
                       const GraphRecipe& recipe, const std::vector<int>* labels,
                       const KmsaConfig& cfg, std::vector<std::string>* warnings) {
  ViewState s;
  s.kernel = resolve_kernel(kernel, X);
  Matrix raw = build_kernel(X, s.kernel, /*center=*/false);
  s.raw_row_means = raw.rowwise().mean();
  s.raw_grand_mean = raw.mean();
  s.K = cfg.center_kernel ? center_kernel(raw) : std::move(raw);

  GraphPair g = build_graph(recipe, X, labels);
  if (warnings) {
    warnings->insert(warnings->end(), g.warnings.begin(), g.warnings.end());
  }
  s.P = laplacian(g.S);
  s.M = constraint_matrix(s.K, g, cfg.ridge);
  s.KPK = s.K * s.P * s.K;
  s.KPK = 0.5 * (s.KPK + s.KPK.transpose()).eval();
  s.U = generalized_eigh(s.KPK, s.M, cfg.d).vectors;
  return s;
}

OptState initialize(const MultiviewDataset& data, const KmsaConfig& cfg,
                    std::vector<FitWarning>* warnings) {
  validate_config(cfg, data);
  const int m = data.num_views();
  OptState st;
  st.states.reserve(static_cast<std::size_t>(m));
  const std::vector<int>* labels = data.labels ? &*data.labels : nullptr;
  for (int v = 0; v < m; ++v) {
    std::vector<std::string> graph_warnings;
    st.states.push_back(prepare_view(data.views[static_cast<std::size_t>(v)],
                                     cfg.kernel_for(v), cfg.graph_for(v), labels,
                                     cfg, &graph_warnings));
    if (warnings) {
      for (auto& msg : graph_warnings) {
        warnings->push_back(
            {FitWarning::Kind::kLassoNotConverged, 0, v, std::move(msg)});
      }
    }
  }
  st.alpha = Vector::Constant(m, 1.0 / m);
  st.objective_trace.push_back(objective(st, cfg));
  return st;
}

Matrix embed(const ViewState& state) { return state.U.transpose() * state.K; }

KmsaModel fit(const MultiviewDataset& data, const KmsaConfig& cfg) {
  KmsaModel model;
  model.config = cfg;
  OptState st = initialize(data, cfg, &model.warnings);
  const int m = data.num_views();

  for (int t = 1; t <= cfg.max_iters; ++t) {
    for (int v = 0; v < m; ++v) {
      st.states[static_cast<std::size_t>(v)].U = update_view(st, v, cfg);
    }
    if (cfg.learn_weights) {
      WeightUpdate wu = update_weights(st, cfg);
      for (int v : wu.clamped) {
        std::ostringstream os;
        os << "trace term " << wu.traces(v) << " of view " << v
           << " is not positive; clamped";
        model.warnings.push_back({FitWarning::Kind::kWeightClamp, t, v, os.str()});
      }
      if (wu.shift > 0.0) {
        std::ostringstream os;
        os << "non-positive trace terms; shifted by " << wu.shift;
        model.warnings.push_back({FitWarning::Kind::kWeightShift, t, -1, os.str()});
      }
      // Adjusted traces no longer give the exact minimizer, so only accept
      // weights that do not increase the objective.
      const double before = objective(st, cfg);
      Vector previous = st.alpha;
      st.alpha = std::move(wu.alpha);
      if (!wu.clamped.empty() || wu.shift > 0.0) {
        const double after = objective(st, cfg);
        if (after > before) {
          st.alpha = std::move(previous);
          model.warnings.push_back({FitWarning::Kind::kWeightRejected, t, -1,
                                    "weight update would increase the objective; kept"});
        }
      }
    }
    st.iter = t;
    const double prev = st.objective_trace.back();
    const double cur = objective(st, cfg);
    st.objective_trace.push_back(cur);
    if (cur - prev > 1e-8 * (1.0 + std::abs(prev))) {
      std::ostringstream os;
      os.precision(17);
      os << "objective increased from " << prev << " to " << cur;
      model.warnings.push_back({FitWarning::Kind::kNonMonotone, t, -1, os.str()});
    }
    if (std::abs(cur - prev) <= cfg.tol * (1.0 + std::abs(prev))) {
      model.converged = true;
      break;
    }
  }

  model.iterations = st.iter;
  model.alpha = st.alpha;
  model.objective_trace = std::move(st.objective_trace);
  model.states = std::move(st.states);
  model.embeddings.reserve(static_cast<std::size_t>(m));
  for (const ViewState& s : model.states) model.embeddings.push_back(embed(s));
  model.training = data;
  return model;
}

std::vector<Matrix> transform(const KmsaModel& model,
                              const std::vector<Matrix>& new_points,
                              const MultiviewDataset& training) {
  const int m = model.num_views();
  if (static_cast<int>(new_points.size()) != m ||
      training.num_views() != m) {
    throw DimensionError("transform: expected " + std::to_string(m) + " views");
  }
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int v = 0; v < m; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    const ViewState& s = model.states[vi];
    const Matrix& Xtr = training.views[vi];
    const Matrix& Xnew = new_points[vi];
    if (Xnew.rows() != Xtr.rows()) {
      throw DimensionError("transform: view " + std::to_string(v) + " has " +
                           std::to_string(Xnew.rows()) + " features, expected " +
                           std::to_string(Xtr.rows()));
    }
    if (Xtr.cols() != s.U.rows()) {
      throw DimensionError("transform: training data does not match the model");
    }
    if (Xnew.cols() == 0) {
      out.emplace_back(s.U.cols(), 0);
      continue;
    }
    Matrix k_new = cross_kernel(Xtr, Xnew, s.kernel);
    if (model.config.center_kernel) {
      k_new = center_cross_kernel(k_new, s.raw_row_means, s.raw_grand_mean);
    }
    out.push_back(s.U.transpose() * k_new);
  }
  return out;
}

std::vector<Matrix> transform(const KmsaModel& model,
                              const std::vector<Matrix>& new_points) {
  return transform(model, new_points, model.training);
}

}  // namespace kmsa
