#include "commands.hpp"

#include "kmsa/data_io.hpp"
#include "kmsa/errors.hpp"
#include "kmsa/evaluation.hpp"
#include "kmsa/optimizer.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace kmsa::cli {
namespace {

using nlohmann::json;

// Flag combinations the parser cannot reject on its own; exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitArgs {
  std::string data;
  std::string out;
  std::string config;
  std::string recipe;
};

struct TransformArgs {
  std::string model;
  std::string data;
  std::string out;
};

struct EvalArgs {
  std::string task = "classify";
  std::string data;
  std::string config;
  std::string recipe;
  std::string out;
  int repeats = 20;
  double train_frac = 0.5;
  std::uint64_t seed = 0;
  std::vector<int> cutoffs{5, 10, 20};
};

struct SynthArgs {
  std::string out;
  SyntheticSpec spec;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
    case ErrorKind::kFormat:
    case ErrorKind::kVersion:
      return kIoFailure;
    case ErrorKind::kNumeric:
    case ErrorKind::kWeightDomain:
      return kNumericFailure;
    case ErrorKind::kConfig:
    case ErrorKind::kGraph:
    case ErrorKind::kDimension:
    case ErrorKind::kEval:
      return kConfigFailure;
  }
  return kConfigFailure;
}

std::string join(const Vector& v, char sep) {
  std::string s;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_double(v(i));
  }
  return s;
}

KmsaConfig resolve_config(const std::string& path, const std::string& recipe) {
  KmsaConfig cfg = path.empty() ? KmsaConfig{} : load_config(path);
  if (!recipe.empty()) {
    const auto kind = parse_graph_kind(recipe);
    if (!kind) throw UsageError("unknown recipe '" + recipe + "'");
    GraphRecipe g;
    g.kind = *kind;
    cfg.graph = {g};
  }
  return cfg;
}

void require_labels(const KmsaConfig& cfg, const MultiviewDataset& data,
                    const std::string& dir) {
  if (data.has_labels()) return;
  for (const GraphRecipe& g : cfg.graph) {
    if (g.kind == GraphKind::kLda) {
      throw ConfigError({{ConfigReason::kLdaRequiresLabels,
                          "recipe lda requires " +
                              (fs::path(dir) / "labels.csv").string() +
                              ", which is missing"}});
    }
  }
}

fs::path prepare_out(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out + ": " + ec.message());
  return fs::path(out);
}

// Row per sample, first two embedding dimensions and the label if known.
void write_plot(const fs::path& path, const Matrix& Y,
                const std::optional<std::vector<int>>& labels) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const Index dims = std::min<Index>(2, Y.rows());
  out << (dims == 2 ? "x,y" : "x") << (labels ? ",label" : "") << '\n';
  for (Index i = 0; i < Y.cols(); ++i) {
    for (Index k = 0; k < dims; ++k) {
      if (k) out << ',';
      out << format_double(Y(k, i));
    }
    if (labels) out << ',' << (*labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  KmsaConfig cfg = resolve_config(a.config, a.recipe);
  MultiviewDataset data = load_dataset(a.data);
  require_labels(cfg, data, a.data);
  KmsaModel model = fit(data, cfg);

  const fs::path dir = prepare_out(a.out);
  save_model(model, dir / "model");

  {
    std::ofstream trace(dir / "trace.csv");
    if (!trace) throw IoError("cannot write trace.csv");
    trace << "iteration,objective\n";
    for (std::size_t t = 0; t < model.objective_trace.size(); ++t) {
      trace << t << ',' << format_double(model.objective_trace[t]) << '\n';
    }
  }
  {
    std::ofstream weights(dir / "weights.csv");
    if (!weights) throw IoError("cannot write weights.csv");
    weights << "view,alpha\n";
    for (Index v = 0; v < model.alpha.size(); ++v) {
      weights << v + 1 << ',' << format_double(model.alpha(v)) << '\n';
    }
  }
  for (int v = 0; v < model.num_views(); ++v) {
    const std::string k = std::to_string(v + 1);
    const Matrix& Y = model.embeddings[static_cast<std::size_t>(v)];
    write_csv_matrix(dir / ("embedding_" + k + ".csv"), Y.transpose());
    write_plot(dir / ("plot_" + k + ".csv"), Y, data.labels);
  }

  std::size_t nonmono = 0;
  for (const FitWarning& w : model.warnings) {
    if (w.kind == FitWarning::Kind::kNonMonotone) ++nonmono;
  }
  out << "command=fit status=ok views=" << model.num_views()
      << " samples=" << data.num_samples() << " d=" << cfg.d
      << " iterations=" << model.iterations
      << " converged=" << (model.converged ? "true" : "false")
      << " objective=" << format_double(model.objective_trace.back())
      << " alpha=" << join(model.alpha, ';') << " warnings=" << model.warnings.size()
      << " non_monotone=" << nonmono << '\n';
  return kOk;
}

int cmd_transform(const TransformArgs& a, std::ostream& out) {
  const KmsaModel model = load_model(a.model);
  MultiviewDataset data = load_dataset(a.data);
  if (data.num_views() != model.num_views()) {
    throw DimensionError("model has " + std::to_string(model.num_views()) +
                         " views but " + a.data + " has " +
                         std::to_string(data.num_views()));
  }
  for (int v = 0; v < data.num_views(); ++v) {
    Matrix& X = data.views[static_cast<std::size_t>(v)];
    if (X.cols() == 0) {
      X.resize(model.training.views[static_cast<std::size_t>(v)].rows(), 0);
    }
  }
  const std::vector<Matrix> Y = transform(model, data.views);
  const fs::path dir = prepare_out(a.out);
  for (std::size_t v = 0; v < Y.size(); ++v) {
    write_csv_matrix(dir / ("embedding_" + std::to_string(v + 1) + ".csv"),
                     Y[v].transpose());
  }
  out << "command=transform status=ok views=" << Y.size()
      << " samples=" << (Y.empty() ? 0 : Y.front().cols())
      << " d=" << (Y.empty() ? 0 : Y.front().rows()) << '\n';
  return kOk;
}

// Per class, a fraction of the members (at least one) goes to training.
std::pair<std::vector<Index>, std::vector<Index>> stratified_split(
    const std::vector<int>& labels, double frac, std::uint64_t seed) {
  std::map<int, std::vector<Index>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[labels[i]].push_back(static_cast<Index>(i));
  }
  std::mt19937_64 rng(seed);
  std::vector<Index> train, test;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    const auto n = members.size();
    auto n_train = static_cast<std::size_t>(std::lround(frac * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n);
    train.insert(train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

json retrieval_json(const RetrievalMetrics& r) {
  return {{"cutoffs", r.cutoffs},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"map", r.mean_average_precision}};
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const EvalTask task =
      a.task == "retrieve" ? EvalTask::kRetrieval : EvalTask::kClassification;
  if (!(a.train_frac > 0.0 && a.train_frac < 1.0)) {
    throw UsageError("--train-frac must be in (0, 1)");
  }
  if (a.repeats < 1) throw UsageError("--repeats must be at least 1");
  const KmsaConfig cfg = resolve_config(a.config, a.recipe);
  const MultiviewDataset data = load_dataset(a.data);
  if (!data.has_labels()) {
    throw UsageError("evaluation requires " +
                     (fs::path(a.data) / "labels.csv").string());
  }

  json repeats = json::array();
  double sum_score = 0.0;
  std::vector<double> sum_p(a.cutoffs.size(), 0.0), sum_r(a.cutoffs.size(), 0.0),
      sum_f(a.cutoffs.size(), 0.0);
  for (int i = 0; i < a.repeats; ++i) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
    const auto [train_idx, test_idx] = stratified_split(*data.labels, a.train_frac, seed);
    if (test_idx.empty()) throw EvalError("split left no test samples");
    const MultiviewDataset train = data.subset(train_idx);
    const MultiviewDataset test = data.subset(test_idx);
    const KmsaModel model = fit(train, cfg);
    const std::vector<Matrix> test_y = transform(model, test.views);

    EvalReport report =
        task == EvalTask::kClassification
            ? evaluate_classification(model.embeddings, *train.labels, test_y,
                                      *test.labels)
            : evaluate_retrieval(test_y, *test.labels, model.embeddings,
                                 *train.labels, a.cutoffs);
    json rec{{"repeat", i},
             {"seed", seed},
             {"train_size", train_idx.size()},
             {"test_size", test_idx.size()},
             {"alpha", std::vector<double>(model.alpha.begin(), model.alpha.end())},
             {"best_view", report.best_view}};
    json per_view = json::array();
    for (const ViewMetrics& vm : report.per_view) {
      per_view.push_back(task == EvalTask::kClassification
                             ? json{{"accuracy", vm.accuracy}}
                             : retrieval_json(vm.retrieval));
    }
    rec["per_view"] = per_view;
    const ViewMetrics& best = report.best();
    sum_score += best.score();
    if (task == EvalTask::kClassification) {
      rec["accuracy"] = best.accuracy;
    } else {
      rec["retrieval"] = retrieval_json(best.retrieval);
      for (std::size_t c = 0; c < a.cutoffs.size(); ++c) {
        sum_p[c] += best.retrieval.precision[c];
        sum_r[c] += best.retrieval.recall[c];
        sum_f[c] += best.retrieval.f1[c];
      }
    }
    repeats.push_back(std::move(rec));
  }

  const double n = a.repeats;
  json mean;
  if (task == EvalTask::kClassification) {
    mean["accuracy"] = sum_score / n;
  } else {
    auto scaled = [n](std::vector<double> v) {
      for (double& x : v) x /= n;
      return v;
    };
    mean = {{"cutoffs", a.cutoffs},
            {"precision", scaled(sum_p)},
            {"recall", scaled(sum_r)},
            {"f1", scaled(sum_f)},
            {"map", sum_score / n}};
  }
  json report{{"task", a.task},
              {"train_frac", a.train_frac},
              {"seed", a.seed},
              {"config", config_to_json(cfg)},
              {"repeats", repeats},
              {"mean", mean}};
  const fs::path dir = prepare_out(a.out);
  write_json(dir / "report.json", report);

  out << "command=eval status=ok task=" << a.task << " repeats=" << a.repeats
      << " train_frac=" << format_double(a.train_frac) << " mean_"
      << (task == EvalTask::kClassification ? "accuracy=" : "map=")
      << format_double(sum_score / n) << '\n';
  return kOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const SyntheticSpec& s = a.spec;
  if (s.classes < 1 || s.per_class < 1 || s.informative_views < 0 ||
      s.noise_views < 0 || s.informative_views + s.noise_views < 1 ||
      s.latent_dim < 1 || s.view_dim < 1 || !(s.noise_scale >= 0.0)) {
    throw UsageError("synthetic counts must be positive and at least one view requested");
  }
  const MultiviewDataset data = generate_synthetic(s);
  save_dataset(data, prepare_out(a.out));
  out << "command=synth status=ok views=" << data.num_views()
      << " samples=" << data.num_samples() << " classes=" << s.classes
      << " seed=" << s.seed << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernelized multiview subspace analysis", "kmsa"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model on a dataset directory");
  fit_cmd->add_option("--data", fit_args.data, "Dataset directory")->required();
  fit_cmd->add_option("--out", fit_args.out, "Output directory")->required();
  fit_cmd->add_option("--config", fit_args.config, "JSON configuration file");
  fit_cmd->add_option("--recipe", fit_args.recipe, "Graph recipe for all views")
      ->check(CLI::IsMember({"pca", "lpp", "lda", "spp"}));

  TransformArgs tr_args;
  auto* tr_cmd = app.add_subcommand("transform", "Embed new samples with a saved model");
  tr_cmd->add_option("--model", tr_args.model, "Model directory")->required();
  tr_cmd->add_option("--data", tr_args.data, "Dataset directory")->required();
  tr_cmd->add_option("--out", tr_args.out, "Output directory")->required();

  EvalArgs ev_args;
  auto* ev_cmd = app.add_subcommand("eval", "Repeated random-split evaluation");
  ev_cmd->add_option("--task", ev_args.task, "classify or retrieve")
      ->check(CLI::IsMember({"classify", "retrieve"}));
  ev_cmd->add_option("--data", ev_args.data, "Dataset directory")->required();
  ev_cmd->add_option("--out", ev_args.out, "Output directory")->required();
  ev_cmd->add_option("--config", ev_args.config, "JSON configuration file");
  ev_cmd->add_option("--recipe", ev_args.recipe, "Graph recipe for all views")
      ->check(CLI::IsMember({"pca", "lpp", "lda", "spp"}));
  ev_cmd->add_option("--repeats", ev_args.repeats, "Number of random splits")
      ->capture_default_str();
  ev_cmd->add_option("--train-frac", ev_args.train_frac, "Training fraction per class")
      ->capture_default_str();
  ev_cmd->add_option("--seed", ev_args.seed, "Base seed; repeat i uses seed + i")
      ->capture_default_str();
  ev_cmd->add_option("--cutoffs", ev_args.cutoffs, "Retrieval cutoffs")
      ->capture_default_str();

  SynthArgs sy_args;
  auto* sy_cmd = app.add_subcommand("synth", "Generate a synthetic multiview dataset");
  sy_cmd->add_option("--out", sy_args.out, "Output directory")->required();
  sy_cmd->add_option("--classes", sy_args.spec.classes)->capture_default_str();
  sy_cmd->add_option("--per-class", sy_args.spec.per_class)->capture_default_str();
  sy_cmd->add_option("--informative-views", sy_args.spec.informative_views)
      ->capture_default_str();
  sy_cmd->add_option("--noise-views", sy_args.spec.noise_views)->capture_default_str();
  sy_cmd->add_option("--latent-dim", sy_args.spec.latent_dim)->capture_default_str();
  sy_cmd->add_option("--view-dim", sy_args.spec.view_dim)->capture_default_str();
  sy_cmd->add_option("--noise-scale", sy_args.spec.noise_scale)->capture_default_str();
  sy_cmd->add_option("--center-spread", sy_args.spec.center_spread)
      ->capture_default_str();
  sy_cmd->add_option("--seed", sy_args.spec.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kConfigFailure;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit_args, out);
    if (tr_cmd->parsed()) return cmd_transform(tr_args, out);
    if (ev_cmd->parsed()) return cmd_eval(ev_args, out);
    if (sy_cmd->parsed()) return cmd_synth(sy_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }
  return kConfigFailure;
}

}  // namespace kmsa::cli
