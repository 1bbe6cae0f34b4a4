// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "kmsa/data_io.hpp"
#include "kmsa/eigsolver.hpp"
#include "kmsa/evaluation.hpp"
#include "kmsa/optimizer.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>

namespace {

using namespace kmsa;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

MultiviewDataset random_views(int m, int n, int classes, std::mt19937_64& rng) {
  MultiviewDataset data;
  for (int v = 0; v < m; ++v) data.views.push_back(oracle::gaussian_matrix(4 + v, n, rng));
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i % classes;
  std::shuffle(labels.begin(), labels.end(), rng);
  data.labels = labels;
  return data;
}

// 1. Objective never increases along a fit.
Outcome monotone_descent() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  int instances = 0, violations = 0;
  double worst = 0.0;
  for (int seed = 0; seed < 3; ++seed) {
    for (int m : {2, 3}) {
      for (int n : {10, 30}) {
        for (int d : {2, 5}) {
          for (const GraphRecipe& recipe :
               {GraphRecipe::pca(), GraphRecipe::lpp(4, 1.0), GraphRecipe::lda()}) {
            KmsaConfig cfg;
            cfg.d = d;
            cfg.graph = {recipe};
            cfg.max_iters = 30;
            const KmsaModel model = fit(random_views(m, n, 3, rng), cfg);
            const auto& t = model.objective_trace;
            for (std::size_t i = 1; i < t.size(); ++i) {
              const double excess = (t[i] - t[i - 1]) / std::max(1.0, std::abs(t[i - 1]));
              worst = std::max(worst, excess);
              if (excess > 1e-8) ++violations;
            }
            ++instances;
          }
        }
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {instances >= 50 && violations == 0 && secs < 60.0,
          std::to_string(instances) + " instances, " + std::to_string(violations) +
              " violations, worst relative increase " + fmt("%.3g", worst) + ", " +
              fmt("%.2f", secs) + " s"};
}

// 2. Relative objective change drops below 1e-6 within 20 sweeps.
Outcome convergence_speed() {
  SyntheticSpec spec;
  spec.noise_views = 0;
  spec.seed = 0;
  const MultiviewDataset data = generate_synthetic(spec);
  bool pass = true;
  std::string detail;
  for (const GraphRecipe& recipe : {GraphRecipe::pca(), GraphRecipe::lda()}) {
    KmsaConfig cfg;
    cfg.graph = {recipe};
    cfg.max_iters = 20;
    cfg.tol = 1e-300;
    const KmsaModel model = fit(data, cfg);
    const auto& t = model.objective_trace;
    int reached = -1;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (std::abs(t[i] - t[i - 1]) < 1e-6 * std::abs(t[i - 1])) {
        reached = static_cast<int>(i);
        break;
      }
    }
    pass = pass && reached > 0 && reached <= 20;
    detail += std::string(to_string(recipe.kind)) + " sweep " +
              (reached > 0 ? std::to_string(reached) : std::string("none")) + "; ";
  }
  return {pass, detail};
}

std::vector<oracle::Mat> kpk_of(const OptState& s) {
  std::vector<oracle::Mat> a;
  for (const ViewState& v : s.states) a.push_back(v.K * v.P * v.K);
  return a;
}

std::vector<oracle::Mat> u_of(const OptState& s) {
  std::vector<oracle::Mat> u;
  for (const ViewState& v : s.states) u.push_back(v.U);
  return u;
}

// Oracle trace terms; G = sum_v a_v^r t_v.
std::vector<double> oracle_traces(const std::vector<oracle::Mat>& U,
                                  const std::vector<oracle::Mat>& A, double kappa,
                                  double eta) {
  const std::size_t m = U.size();
  std::vector<double> t(m);
  for (std::size_t v = 0; v < m; ++v) {
    t[v] = oracle::quad_trace(U[v], A[v]) + kappa;
    for (std::size_t w = 0; w < m; ++w) {
      if (w != v) t[v] += oracle::coupling(U[v], U[w]) / (2.0 * eta);
    }
  }
  return t;
}

// Initialized LPP states whose oracle trace terms are all positive.
std::vector<OptState> positive_trace_states(int count, std::uint64_t seed, KmsaConfig cfg) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m_dist(2, 3);
  std::vector<OptState> out;
  for (int attempt = 0; attempt < 1000 * count && static_cast<int>(out.size()) < count;
       ++attempt) {
    const MultiviewDataset data = random_views(m_dist(rng), 12, 2, rng);
    OptState s = initialize(data, cfg);
    for (int v = 0; v < static_cast<int>(s.states.size()); ++v) {
      s.states[static_cast<std::size_t>(v)].U = update_view(s, v, cfg);
    }
    const auto t = oracle_traces(u_of(s), kpk_of(s), cfg.kappa, cfg.eta);
    if (*std::min_element(t.begin(), t.end()) > 0.0) out.push_back(std::move(s));
  }
  return out;
}

// 3. Closed-form weights attain the grid minimum.
Outcome weight_optimality() {
  KmsaConfig cfg;
  cfg.graph = {GraphRecipe::lpp(4, 1.0)};
  const auto states = positive_trace_states(20, 3003, cfg);
  double worst = -std::numeric_limits<double>::infinity();
  int failures = 0;
  for (const OptState& s : states) {
    const auto U = u_of(s);
    const auto A = kpk_of(s);
    const int m = static_cast<int>(U.size());
    const auto t = oracle_traces(U, A, cfg.kappa, cfg.eta);
    const Vector alpha = update_weights(s, cfg).alpha;
    const double g_closed = oracle::multiview_objective(
        U, A, std::vector<double>(alpha.begin(), alpha.end()), cfg.r, cfg.kappa, cfg.eta);
    const auto grid = oracle::simplex_grid_min(
        [&](const std::vector<double>& a) {
          double g = 0.0;
          for (int v = 0; v < m; ++v) {
            g += std::pow(a[static_cast<std::size_t>(v)], cfg.r) * t[static_cast<std::size_t>(v)];
          }
          return g;
        },
        m, 1e-3);
    const double g_grid = oracle::multiview_objective(U, A, grid.argmin, cfg.r, cfg.kappa, cfg.eta);
    const double gap = g_closed - g_grid;
    worst = std::max(worst, gap);
    if (gap > 1e-6) ++failures;
  }
  return {states.size() == 20 && failures == 0,
          std::to_string(states.size()) + " instances, " + std::to_string(failures) +
              " above grid, worst G_closed - G_grid " + fmt("%.3g", worst)};
}

// 4. r -> infinity flattens the weights, r -> 1 concentrates them.
Outcome weight_limits() {
  KmsaConfig cfg;
  cfg.graph = {GraphRecipe::lpp(4, 1.0)};
  const auto states = positive_trace_states(10, 4004, cfg);
  double worst_flat = 0.0, worst_peak = 1.0;
  bool pass = !states.empty();
  int used = 0;
  for (const OptState& s : states) {
    const Vector t = weight_trace_terms(s, cfg);
    std::vector<double> sorted(t.begin(), t.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    ++used;
    const double m = static_cast<double>(t.size());
    const Vector flat = weights_from_traces(std::span<const double>(t.data(), t.size()), 100.0);
    const double dev = (flat.array() - 1.0 / m).abs().maxCoeff();
    worst_flat = std::max(worst_flat, dev);
    const Vector peak = weights_from_traces(std::span<const double>(t.data(), t.size()), 1.01);
    Index smallest, top;
    t.minCoeff(&smallest);
    const double mx = peak.maxCoeff(&top);
    worst_peak = std::min(worst_peak, mx);
    pass = pass && dev < 1e-2 && mx > 0.99 && top == smallest;
  }
  pass = pass && used > 0;
  return {pass, std::to_string(used) + " instances, worst |a - 1/m| at r=100 " +
                    fmt("%.3g", worst_flat) + ", smallest max a at r=1.01 " +
                    fmt("%.6f", worst_peak)};
}

// 5. One view, centered linear kernel, PCA graph equals kernel PCA.
Outcome kernel_pca_reduction() {
  std::mt19937_64 rng(5005);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    MultiviewDataset data;
    data.views.push_back(oracle::gaussian_matrix(6, 20, rng));
    KmsaConfig cfg;
    cfg.d = 3;
    cfg.kernel = {KernelSpec::linear()};
    cfg.center_kernel = true;
    const KmsaModel model = fit(data, cfg);
    const oracle::Mat H = oracle::centering_matrix(20);
    const oracle::Mat gram = H * data.views[0].transpose() * data.views[0] * H;
    const double err =
        (oracle::span_projector(model.states[0].U) - oracle::kpca_projector(gram, 3)).norm();
    worst = std::max(worst, err);
  }
  return {worst < 1e-6, "worst projector Frobenius error " + fmt("%.3g", worst)};
}

// 6. The noise view receives the smallest weight.
Outcome noise_view_demotion() {
  bool pass = true;
  std::string detail;
  for (const GraphRecipe& recipe : {GraphRecipe::lda(), GraphRecipe::pca()}) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SyntheticSpec spec;
      spec.seed = seed;
      KmsaConfig cfg;
      cfg.graph = {recipe};
      const KmsaModel model = fit(generate_synthetic(spec), cfg);
      Index arg;
      model.alpha.minCoeff(&arg);
      if (arg == spec.informative_views) ++hits;
    }
    pass = pass && hits >= 18;
    detail += std::string(to_string(recipe.kind)) + " " + std::to_string(hits) + "/20; ";
  }
  return {pass, detail};
}

std::pair<std::vector<Index>, std::vector<Index>> stratified_half(const std::vector<int>& labels,
                                                                  std::uint64_t seed) {
  std::map<int, std::vector<Index>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(static_cast<Index>(i));
  std::mt19937_64 rng(seed);
  std::vector<Index> train, test;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t half = members.size() / 2;
    train.insert(train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(half));
    test.insert(test.end(), members.begin() + static_cast<std::ptrdiff_t>(half), members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

// 7. Learned weights versus fixed uniform weights.
Outcome self_weighting_ablation() {
  SyntheticSpec spec;
  const MultiviewDataset data = generate_synthetic(spec);
  bool pass = true;
  std::string detail;
  for (const GraphRecipe& recipe : {GraphRecipe::lda(), GraphRecipe::pca()}) {
    double learned = 0.0, fixed = 0.0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      const auto [tr_idx, te_idx] = stratified_half(*data.labels, rep);
      const MultiviewDataset train = data.subset(tr_idx);
      const MultiviewDataset test = data.subset(te_idx);
      for (bool learn : {true, false}) {
        KmsaConfig cfg;
        cfg.graph = {recipe};
        cfg.learn_weights = learn;
        const KmsaModel model = fit(train, cfg);
        const EvalReport r = evaluate_classification(model.embeddings, *train.labels,
                                                     transform(model, test.views), *test.labels);
        (learn ? learned : fixed) += r.best().accuracy / 20.0;
      }
    }
    pass = pass && learned >= fixed - 0.01 && learned > fixed;
    detail += std::string(to_string(recipe.kind)) + " learned " + fmt("%.4f", learned) +
              " fixed " + fmt("%.4f", fixed) + "; ";
  }
  return {pass, detail};
}

// 8. Generalized eigensolver against the congruence oracle.
Outcome eigensolver() {
  std::mt19937_64 rng(8008);
  std::uniform_int_distribution<int> n_dist(1, 12);
  double e_val = 0.0, e_proj = 0.0, e_orth = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = n_dist(rng);
    const int d = std::uniform_int_distribution<int>(1, n)(rng);
    const oracle::Mat A = oracle::gaussian_matrix(n, n, rng);
    const oracle::Mat H = 0.5 * (A + A.transpose());
    const oracle::Mat M = oracle::random_spd(n, 0.1, 10.0, rng);
    const auto ref = oracle::congruence_eigh(H, M);
    const auto got = generalized_eigh(H, M, d);
    e_val = std::max(e_val, (got.values - ref.values.head(d)).cwiseAbs().maxCoeff());
    // Compare spectral projectors only over complete eigenvalue clusters.
    int k = d;
    while (k < n && ref.values(k) - ref.values(k - 1) < 1e-6) ++k;
    if (k == d) {
      const oracle::Mat Vr = ref.vectors.leftCols(d);
      e_proj = std::max(e_proj,
                        (got.vectors * got.vectors.transpose() - Vr * Vr.transpose()).norm());
    }
    e_orth = std::max(e_orth, (got.vectors.transpose() * M * got.vectors -
                               oracle::Mat::Identity(d, d))
                                  .cwiseAbs()
                                  .maxCoeff());
  }
  return {e_val < 1e-8 && e_proj < 1e-6 && e_orth < 1e-8,
          "eigenvalues " + fmt("%.3g", e_val) + ", projectors " + fmt("%.3g", e_proj) +
              ", M-orthonormality " + fmt("%.3g", e_orth)};
}

Matrix row(std::initializer_list<double> xs) {
  Matrix X(1, static_cast<Index>(xs.size()));
  Index j = 0;
  for (double x : xs) X(0, j++) = x;
  return X;
}

// 9. Retrieval metrics.
Outcome metrics() {
  bool hand = true;
  hand = hand && average_precision({true, false, true, false}) == (1.0 + 2.0 / 3.0) / 2.0;
  hand = hand && average_precision({false, false}) == 0.0;
  const auto r = retrieval_metrics(row({0}), row({1, 2, 3, 4}), std::vector<int>{7},
                                   std::vector<int>{7, 0, 7, 0}, {1, 2, 3, 4});
  hand = hand && r.precision == std::vector<double>{1.0, 0.5, 2.0 / 3.0, 0.5};
  hand = hand && r.recall == std::vector<double>{0.5, 0.5, 1.0, 1.0};
  hand = hand && r.f1[1] == 0.5;
  hand = hand && r.mean_average_precision == (1.0 + 2.0 / 3.0) / 2.0;
  const auto single = retrieval_metrics(row({0}), row({0.5}), std::vector<int>{1},
                                        std::vector<int>{1}, {1});
  hand = hand && single.precision[0] == 1.0 && single.recall[0] == 1.0 &&
         single.mean_average_precision == 1.0;

  std::mt19937_64 rng(9009);
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int g = std::uniform_int_distribution<int>(2, 15)(rng);
    const int classes = std::uniform_int_distribution<int>(1, std::min(g, 4))(rng);
    std::vector<int> gl(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
      gl[static_cast<std::size_t>(i)] =
          i < classes ? i : std::uniform_int_distribution<int>(0, classes - 1)(rng);
    }
    std::vector<int> ql(4);
    for (int& l : ql) l = std::uniform_int_distribution<int>(0, classes - 1)(rng);
    std::vector<int> cutoffs;
    for (int n = 1; n <= g; ++n) cutoffs.push_back(n);
    const auto res = retrieval_metrics(oracle::gaussian_matrix(3, 4, rng),
                                       oracle::gaussian_matrix(3, g, rng), ql, gl, cutoffs);
    bool ok = res.recall.back() == 1.0;
    for (std::size_t c = 1; c < res.recall.size(); ++c) ok = ok && res.recall[c] >= res.recall[c - 1];
    if (!ok) ++bad;
  }
  return {hand && bad == 0, std::string("hand-worked ") + (hand ? "exact" : "MISMATCH") +
                                ", random configurations failing " + std::to_string(bad) + "/50"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return files;
}

// 10. Save/load and CLI determinism.
Outcome round_trip_and_determinism() {
  const fs::path tmp(KMSA_TEST_TMP);
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  SyntheticSpec spec;
  spec.seed = 11;
  KmsaConfig cfg;
  cfg.graph = {GraphRecipe::lda()};
  const KmsaModel model = fit(generate_synthetic(spec), cfg);
  save_model(model, tmp / "model");
  const KmsaModel back = load_model(tmp / "model");
  bool alpha_equal = back.alpha.size() == model.alpha.size();
  for (Index i = 0; alpha_equal && i < model.alpha.size(); ++i) {
    alpha_equal = std::memcmp(&back.alpha(i), &model.alpha(i), sizeof(double)) == 0;
  }

#ifdef KMSA_CLI_PATH
  const std::string exe = KMSA_CLI_PATH;
  auto invoke = [&](const fs::path& run) {
    fs::create_directories(run);
    const std::string d = run.string();
    const std::string cmds =
        "\"" + exe + "\" synth --out \"" + d + "/data\" --seed 5 --per-class 10 && \"" + exe +
        "\" fit --data \"" + d + "/data\" --out \"" + d + "/fit\" --recipe lda && \"" + exe +
        "\" eval --data \"" + d + "/data\" --out \"" + d +
        "/eval\" --repeats 3 --seed 2 && \"" + exe + "\" eval --task retrieve --data \"" + d +
        "/data\" --out \"" + d + "/retrieve\" --repeats 2 --seed 2";
    const int rc = std::system(("(" + cmds + ") > \"" + d + ".stdout\" 2>&1").c_str());
    return rc;
  };
  const int rc1 = invoke(tmp / "run1");
  const int rc2 = invoke(tmp / "run2");
  const auto a = tree_contents(tmp / "run1");
  const auto b = tree_contents(tmp / "run2");
  const bool same_stdout = slurp(tmp / "run1.stdout") == slurp(tmp / "run2.stdout");
  const bool cli_ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b && same_stdout;
  return {alpha_equal && cli_ok,
          std::string("alpha ") + (alpha_equal ? "bit-identical" : "DIFFERS") + ", CLI runs " +
              (rc1 == 0 && rc2 == 0 ? "succeeded" : "FAILED") + ", " + std::to_string(a.size()) +
              " files " + (a == b ? "byte-identical" : "DIFFER") + ", stdout " +
              (same_stdout ? "identical" : "DIFFERS")};
#else
  return {false, std::string("alpha ") + (alpha_equal ? "bit-identical" : "DIFFERS") +
                     ", CLI not built"};
#endif
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"monotone descent", monotone_descent},
      {"convergence within 20 sweeps", convergence_speed},
      {"closed-form weight optimality", weight_optimality},
      {"weight limits in r", weight_limits},
      {"kernel PCA reduction", kernel_pca_reduction},
      {"noise view demotion", noise_view_demotion},
      {"learned versus fixed weights", self_weighting_ablation},
      {"generalized eigensolver", eigensolver},
      {"retrieval metrics", metrics},
      {"round trip and determinism", round_trip_and_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu [%s] %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
