#include "kmsa/data_io.hpp"

#include "kmsa/errors.hpp"
#include "kmsa/optimizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <sstream>

namespace kmsa {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(
        start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

Matrix read_csv_matrix(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_commas(line);
    if (first_content) {
      first_content = false;
      double probe;
      if (!parse_double(cells.front(), probe) &&
          cells.front() != "nan" && cells.front() != "inf") {
        continue;  // header row
      }
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw FormatError(path.string() + ": row " + std::to_string(line_no) +
                        " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(width));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], row[c]) || !std::isfinite(row[c])) {
        throw FormatError(path.string() + ": invalid value '" + cells[c] +
                          "' at row " + std::to_string(line_no) + ", column " +
                          std::to_string(c + 1));
      }
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void write_csv_matrix(const fs::path& path, const Matrix& m) {
  std::ofstream out = open_out(path);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<int> read_labels(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    int value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      if (labels.empty() && line_no == 1) continue;  // header
      throw FormatError(path.string() + ": invalid label '" + cell +
                        "' at row " + std::to_string(line_no));
    }
    labels.push_back(value);
  }
  return labels;
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  std::ofstream out = open_out(path);
  for (int l : labels) out << l << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

MultiviewDataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("dataset directory " + dir.string() + " does not exist");
  }
  static const std::regex view_re(R"(view_(\d+)\.csv)");
  std::map<long, fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch match;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, match, view_re)) {
      files.emplace(std::stol(match[1].str()), entry.path());
    }
  }
  if (files.empty()) {
    throw IoError("no view_<k>.csv files in " + dir.string());
  }
  MultiviewDataset data;
  Index n = -1;
  std::string first_name;
  for (const auto& [k, path] : files) {
    Matrix rows = read_csv_matrix(path);
    if (n < 0) {
      n = rows.rows();
      first_name = path.filename().string();
    } else if (rows.rows() != n) {
      throw FormatError(first_name + " has " + std::to_string(n) + " rows but " +
                        path.filename().string() + " has " +
                        std::to_string(rows.rows()));
    }
    data.views.push_back(rows.transpose());
    data.view_names.push_back(path.stem().string());
  }
  const fs::path labels_path = dir / "labels.csv";
  if (fs::exists(labels_path)) {
    std::vector<int> labels = read_labels(labels_path);
    if (static_cast<Index>(labels.size()) != n) {
      throw FormatError("labels.csv has " + std::to_string(labels.size()) +
                        " rows but views have " + std::to_string(n));
    }
    data.labels = std::move(labels);
  }
  return data;
}

void save_dataset(const MultiviewDataset& data, const fs::path& dir) {
  fs::create_directories(dir);
  for (int v = 0; v < data.num_views(); ++v) {
    write_csv_matrix(dir / ("view_" + std::to_string(v + 1) + ".csv"),
                     data.views[static_cast<std::size_t>(v)].transpose());
  }
  if (data.labels) write_labels(dir / "labels.csv", *data.labels);
}

MultiviewDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.classes < 1 || spec.per_class < 1 || spec.informative_views < 0 ||
      spec.noise_views < 0 || spec.informative_views + spec.noise_views < 1 ||
      spec.latent_dim < 1 || spec.view_dim < 1 || !(spec.noise_scale >= 0.0)) {
    throw ConfigError({{ConfigReason::kNoViews, "invalid synthetic spec"}});
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](Index rows, Index cols, double scale) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = scale * normal(rng);
    }
    return m;
  };

  const Index n = static_cast<Index>(spec.classes) * spec.per_class;
  const Matrix centers = gaussian(spec.latent_dim, spec.classes, spec.center_spread);
  Matrix latent(spec.latent_dim, n);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int c = 0; c < spec.classes; ++c) {
    for (int i = 0; i < spec.per_class; ++i) {
      const Index col = static_cast<Index>(c) * spec.per_class + i;
      labels[static_cast<std::size_t>(col)] = c;
      latent.col(col) = centers.col(c) + gaussian(spec.latent_dim, 1, 1.0);
    }
  }

  MultiviewDataset data;
  for (int v = 0; v < spec.informative_views; ++v) {
    const Matrix map = gaussian(spec.view_dim, spec.latent_dim,
                                1.0 / std::sqrt(double(spec.latent_dim)));
    data.views.push_back(map * latent +
                         gaussian(spec.view_dim, n, spec.noise_scale));
    data.view_names.push_back("informative_" + std::to_string(v + 1));
  }
  for (int v = 0; v < spec.noise_views; ++v) {
    data.views.push_back(gaussian(spec.view_dim, n, 1.0));
    data.view_names.push_back("noise_" + std::to_string(v + 1));
  }
  data.labels = std::move(labels);
  return data;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

json kernel_to_json(const KernelSpec& k) {
  json j;
  j["kind"] = to_string(k.kind);
  switch (k.kind) {
    case KernelKind::kGaussian:
      if (k.bandwidth) {
        j["bandwidth"] = *k.bandwidth;
      } else {
        j["bandwidth"] = "median";
      }
      break;
    case KernelKind::kPolynomial:
      j["degree"] = k.degree;
      j["offset"] = k.offset;
      break;
    case KernelKind::kLinear:
      break;
  }
  return j;
}

json graph_to_json(const GraphRecipe& g) {
  json j;
  j["kind"] = to_string(g.kind);
  switch (g.kind) {
    case GraphKind::kLpp:
      j["neighbors"] = g.neighbors;
      j["heat"] = g.heat;
      break;
    case GraphKind::kSpp:
      j["lambda"] = g.lambda;
      j["lasso_max_iters"] = g.lasso_max_iters;
      break;
    case GraphKind::kPca:
    case GraphKind::kLda:
      break;
  }
  return j;
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(known.begin(), known.end(),
                     [&](const char* k) { return it.key() == k; })) {
      throw FormatError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

KernelSpec kernel_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("kernel entry must be an object");
  reject_unknown(j, {"kind", "bandwidth", "degree", "offset"}, "kernel");
  const auto kind = parse_kernel_kind(get_as<std::string>(j, "kind"));
  if (!kind) throw FormatError("unknown kernel kind in config");
  KernelSpec k;
  k.kind = *kind;
  if (j.contains("bandwidth")) {
    const json& b = j.at("bandwidth");
    if (b.is_string()) {
      if (b.get<std::string>() != "median") {
        throw FormatError("bandwidth must be a number or \"median\"");
      }
    } else {
      k.bandwidth = get_as<double>(j, "bandwidth");
    }
  }
  if (j.contains("degree")) k.degree = get_as<int>(j, "degree");
  if (j.contains("offset")) k.offset = get_as<double>(j, "offset");
  return k;
}

GraphRecipe graph_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("graph entry must be an object");
  reject_unknown(j, {"kind", "neighbors", "heat", "lambda", "lasso_max_iters"},
                 "graph");
  const auto kind = parse_graph_kind(get_as<std::string>(j, "kind"));
  if (!kind) throw FormatError("unknown graph kind in config");
  GraphRecipe g;
  g.kind = *kind;
  if (j.contains("neighbors")) g.neighbors = get_as<int>(j, "neighbors");
  if (j.contains("heat")) g.heat = get_as<double>(j, "heat");
  if (j.contains("lambda")) g.lambda = get_as<double>(j, "lambda");
  if (j.contains("lasso_max_iters")) {
    g.lasso_max_iters = get_as<int>(j, "lasso_max_iters");
  }
  return g;
}

}  // namespace

json config_to_json(const KmsaConfig& cfg) {
  json j;
  j["d"] = cfg.d;
  j["r"] = cfg.r;
  j["kappa"] = cfg.kappa;
  j["eta"] = cfg.eta;
  j["max_iters"] = cfg.max_iters;
  j["tol"] = cfg.tol;
  j["ridge"] = cfg.ridge;
  j["center_kernel"] = cfg.center_kernel;
  j["learn_weights"] = cfg.learn_weights;
  j["weight_domain"] = to_string(cfg.weight_domain);
  j["seed"] = cfg.seed;
  j["kernel"] = json::array();
  for (const KernelSpec& k : cfg.kernel) j["kernel"].push_back(kernel_to_json(k));
  j["graph"] = json::array();
  for (const GraphRecipe& g : cfg.graph) j["graph"].push_back(graph_to_json(g));
  return j;
}

KmsaConfig config_from_json(const json& j, const KmsaConfig& base) {
  if (!j.is_object()) throw FormatError("config must be an object");
  reject_unknown(j,
                 {"d", "r", "kappa", "eta", "max_iters", "tol", "ridge",
                  "center_kernel", "learn_weights", "weight_domain", "seed", "kernel",
                  "graph"},
                 "config");
  KmsaConfig cfg = base;
  if (j.contains("d")) cfg.d = get_as<int>(j, "d");
  if (j.contains("r")) cfg.r = get_as<double>(j, "r");
  if (j.contains("kappa")) cfg.kappa = get_as<double>(j, "kappa");
  if (j.contains("eta")) cfg.eta = get_as<double>(j, "eta");
  if (j.contains("max_iters")) cfg.max_iters = get_as<int>(j, "max_iters");
  if (j.contains("tol")) cfg.tol = get_as<double>(j, "tol");
  if (j.contains("ridge")) cfg.ridge = get_as<double>(j, "ridge");
  if (j.contains("center_kernel")) {
    cfg.center_kernel = get_as<bool>(j, "center_kernel");
  }
  if (j.contains("learn_weights")) {
    cfg.learn_weights = get_as<bool>(j, "learn_weights");
  }
  if (j.contains("weight_domain")) {
    const auto policy = parse_weight_domain(get_as<std::string>(j, "weight_domain"));
    if (!policy) throw FormatError("config: unknown weight_domain");
    cfg.weight_domain = *policy;
  }
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    cfg.kernel.clear();
    if (k.is_array()) {
      for (const json& e : k) cfg.kernel.push_back(kernel_from_json(e));
    } else {
      cfg.kernel.push_back(kernel_from_json(k));
    }
  }
  if (j.contains("graph")) {
    const json& g = j.at("graph");
    cfg.graph.clear();
    if (g.is_array()) {
      for (const json& e : g) cfg.graph.push_back(graph_from_json(e));
    } else {
      cfg.graph.push_back(graph_from_json(g));
    }
  }
  return cfg;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

KmsaConfig load_config(const fs::path& path) {
  return config_from_json(read_json(path));
}

void save_config(const KmsaConfig& cfg, const fs::path& path) {
  write_json(path, config_to_json(cfg));
}

// ---------------------------------------------------------------------------
// Models

void save_model(const KmsaModel& model, const fs::path& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = "kmsa-model";
  manifest["format_version"] = kModelFormatVersion;
  manifest["config"] = config_to_json(model.config);
  manifest["alpha"] = std::vector<double>(model.alpha.begin(), model.alpha.end());
  manifest["objective_trace"] = model.objective_trace;
  manifest["iterations"] = model.iterations;
  manifest["converged"] = model.converged;
  manifest["num_views"] = model.num_views();
  manifest["num_samples"] = model.training.num_samples();
  manifest["has_labels"] = model.training.has_labels();
  json views = json::array();
  for (const ViewState& s : model.states) {
    json v;
    v["kernel"] = kernel_to_json(s.kernel);
    v["raw_grand_mean"] = s.raw_grand_mean;
    views.push_back(v);
  }
  manifest["views"] = views;
  json warnings = json::array();
  for (const FitWarning& w : model.warnings) {
    warnings.push_back({{"kind", to_string(w.kind)},
                        {"iteration", w.iteration},
                        {"view", w.view},
                        {"message", w.message}});
  }
  manifest["warnings"] = warnings;
  write_json(dir / "manifest.json", manifest);

  for (int v = 0; v < model.num_views(); ++v) {
    const auto vi = static_cast<std::size_t>(v);
    const std::string k = std::to_string(v + 1);
    write_csv_matrix(dir / ("U_" + k + ".csv"), model.states[vi].U);
    write_csv_matrix(dir / ("embedding_" + k + ".csv"),
                     model.embeddings[vi].transpose());
  }
  save_dataset(model.training, dir / "training");
}

KmsaModel load_model(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw IoError("no manifest.json in " + dir.string());
  }
  const json manifest = read_json(manifest_path);
  if (!manifest.contains("format_version") ||
      !manifest.at("format_version").is_number_integer()) {
    throw FormatError("manifest has no integer format_version");
  }
  const int version = manifest.at("format_version").get<int>();
  if (version != kModelFormatVersion) {
    throw VersionError("model format version " + std::to_string(version) +
                       " is not supported (expected " +
                       std::to_string(kModelFormatVersion) + ")");
  }

  KmsaModel model;
  try {
    model.config = config_from_json(manifest.at("config"));
    const auto alpha = manifest.at("alpha").get<std::vector<double>>();
    model.alpha = Eigen::Map<const Vector>(alpha.data(),
                                           static_cast<Index>(alpha.size()));
    model.objective_trace =
        manifest.at("objective_trace").get<std::vector<double>>();
    model.iterations = manifest.at("iterations").get<int>();
    model.converged = manifest.at("converged").get<bool>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }

  model.training = load_dataset(dir / "training");
  const int m = model.training.num_views();
  if (manifest.at("num_views").get<int>() != m ||
      model.alpha.size() != m || manifest.at("views").size() != std::size_t(m)) {
    throw FormatError("manifest view count does not match stored data");
  }
  const std::vector<int>* labels =
      model.training.labels ? &*model.training.labels : nullptr;
  for (int v = 0; v < m; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    const std::string k = std::to_string(v + 1);
    const KernelSpec kernel = kernel_from_json(manifest.at("views")[vi].at("kernel"));
    ViewState s = prepare_view(model.training.views[vi], kernel,
                               model.config.graph_for(v), labels, model.config);
    Matrix U = read_csv_matrix(dir / ("U_" + k + ".csv"));
    if (U.rows() != s.U.rows() || U.cols() != s.U.cols()) {
      throw FormatError("U_" + k + ".csv has the wrong shape");
    }
    s.U = std::move(U);
    model.states.push_back(std::move(s));
    Matrix Y = read_csv_matrix(dir / ("embedding_" + k + ".csv"));
    model.embeddings.push_back(Y.transpose());
  }
  for (const json& w : manifest.value("warnings", json::array())) {
    FitWarning fw{FitWarning::Kind::kNonMonotone, w.at("iteration").get<int>(),
                  w.at("view").get<int>(), w.at("message").get<std::string>()};
    const std::string kind = w.at("kind").get<std::string>();
    bool known = false;
    for (auto k : {FitWarning::Kind::kNonMonotone, FitWarning::Kind::kWeightClamp,
                   FitWarning::Kind::kWeightShift, FitWarning::Kind::kWeightRejected,
                   FitWarning::Kind::kLassoNotConverged}) {
      if (kind == to_string(k)) {
        fw.kind = k;
        known = true;
      }
    }
    if (!known) throw FormatError("manifest: unknown warning kind " + kind);
    model.warnings.push_back(std::move(fw));
  }
  return model;
}

}  // namespace kmsa
