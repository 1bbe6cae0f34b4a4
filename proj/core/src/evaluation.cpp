#include "kmsa/evaluation.hpp"

#include "kmsa/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace kmsa {

double knn_classify(const Matrix& train, std::span<const int> train_labels,
                    const Matrix& test, std::span<const int> test_labels,
                    int k) {
  if (train.rows() != test.rows()) {
    throw DimensionError("knn_classify: train has " +
                         std::to_string(train.rows()) + " dims, test has " +
                         std::to_string(test.rows()));
  }
  if (static_cast<Index>(train_labels.size()) != train.cols() ||
      static_cast<Index>(test_labels.size()) != test.cols()) {
    throw DimensionError("knn_classify: label count does not match samples");
  }
  if (k < 1 || k > train.cols()) {
    throw DimensionError("knn_classify: need 1 <= k <= training size");
  }
  if (test.cols() == 0) return 0.0;

  std::vector<Index> order(static_cast<std::size_t>(train.cols()));
  std::vector<double> dist(order.size());
  Index correct = 0;
  for (Index q = 0; q < test.cols(); ++q) {
    for (Index i = 0; i < train.cols(); ++i) {
      dist[static_cast<std::size_t>(i)] = (train.col(i) - test.col(q)).squaredNorm();
    }
    std::iota(order.begin(), order.end(), Index{0});
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](Index a, Index b) {
                        const double da = dist[static_cast<std::size_t>(a)];
                        const double db = dist[static_cast<std::size_t>(b)];
                        return da < db || (da == db && a < b);
                      });
    int predicted = train_labels[static_cast<std::size_t>(order[0])];
    if (k > 1) {
      std::map<int, int> votes;
      int best_votes = 0;
      for (int j = 0; j < k; ++j) {
        votes[train_labels[static_cast<std::size_t>(order[j])]]++;
      }
      // Walk in distance order so the nearest voter wins vote ties.
      for (int j = 0; j < k; ++j) {
        const int label = train_labels[static_cast<std::size_t>(order[j])];
        if (votes[label] > best_votes) {
          best_votes = votes[label];
          predicted = label;
        }
      }
    }
    if (predicted == test_labels[static_cast<std::size_t>(q)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.cols());
}

double average_precision(const std::vector<bool>& relevant) {
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t rank = 0; rank < relevant.size(); ++rank) {
    if (relevant[rank]) {
      hits += 1.0;
      sum += hits / static_cast<double>(rank + 1);
    }
  }
  return hits > 0.0 ? sum / hits : 0.0;
}

double l1_distance(const Eigen::Ref<const Vector>& a,
                   const Eigen::Ref<const Vector>& b) {
  return (a - b).cwiseAbs().sum();
}

RetrievalMetrics retrieval_metrics(const Matrix& queries, const Matrix& gallery,
                                   std::span<const int> query_labels,
                                   std::span<const int> gallery_labels,
                                   const std::vector<int>& cutoffs) {
  if (queries.rows() != gallery.rows()) {
    throw DimensionError("retrieval_metrics: query and gallery dims differ");
  }
  if (static_cast<Index>(query_labels.size()) != queries.cols() ||
      static_cast<Index>(gallery_labels.size()) != gallery.cols()) {
    throw DimensionError("retrieval_metrics: label count does not match samples");
  }
  if (gallery.cols() == 0) throw EvalError("retrieval_metrics: empty gallery");
  for (int c : cutoffs) {
    if (c < 1) throw EvalError("retrieval_metrics: cutoffs must be positive");
  }

  std::map<int, int> class_sizes;
  for (int l : gallery_labels) class_sizes[l]++;

  const Index g = gallery.cols();
  RetrievalMetrics out;
  out.cutoffs = cutoffs;
  std::vector<double> sum_p(cutoffs.size(), 0.0);
  std::vector<double> sum_r(cutoffs.size(), 0.0);
  std::vector<Index> order(static_cast<std::size_t>(g));
  std::vector<double> dist(order.size());
  std::vector<bool> rel(order.size());

  for (Index q = 0; q < queries.cols(); ++q) {
    const int label = query_labels[static_cast<std::size_t>(q)];
    const auto it = class_sizes.find(label);
    if (it == class_sizes.end()) {
      throw EvalError("retrieval_metrics: query " + std::to_string(q) +
                      " has class " + std::to_string(label) +
                      " with no gallery members");
    }
    const double total_relevant = it->second;
    for (Index i = 0; i < g; ++i) {
      dist[static_cast<std::size_t>(i)] = l1_distance(gallery.col(i), queries.col(q));
    }
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
    });
    for (std::size_t r = 0; r < order.size(); ++r) {
      rel[r] = gallery_labels[static_cast<std::size_t>(order[r])] == label;
    }
    out.average_precisions.push_back(average_precision(rel));

    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      const auto n = std::min<std::size_t>(static_cast<std::size_t>(cutoffs[c]),
                                           rel.size());
      const double hits = static_cast<double>(
          std::count(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(n), true));
      sum_p[c] += hits / static_cast<double>(n);
      sum_r[c] += hits / total_relevant;
    }
  }

  const double nq = static_cast<double>(queries.cols());
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    const double p = nq > 0 ? sum_p[c] / nq : 0.0;
    const double r = nq > 0 ? sum_r[c] / nq : 0.0;
    out.precision.push_back(p);
    out.recall.push_back(r);
    out.f1.push_back(p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0);
  }
  out.mean_average_precision =
      out.average_precisions.empty()
          ? 0.0
          : std::accumulate(out.average_precisions.begin(),
                            out.average_precisions.end(), 0.0) /
                nq;
  return out;
}

const char* to_string(EvalTask task) {
  return task == EvalTask::kClassification ? "classify" : "retrieve";
}

double ViewMetrics::score() const {
  return task == EvalTask::kClassification ? accuracy
                                           : retrieval.mean_average_precision;
}

int select_best_view(const std::vector<ViewMetrics>& per_view) {
  int best = 0;
  for (std::size_t v = 1; v < per_view.size(); ++v) {
    if (per_view[v].score() > per_view[static_cast<std::size_t>(best)].score()) {
      best = static_cast<int>(v);
    }
  }
  return best;
}

EvalReport evaluate_classification(const std::vector<Matrix>& train,
                                   std::span<const int> train_labels,
                                   const std::vector<Matrix>& test,
                                   std::span<const int> test_labels) {
  if (train.size() != test.size() || train.empty()) {
    throw DimensionError("evaluate_classification: view counts differ");
  }
  EvalReport report;
  report.task = EvalTask::kClassification;
  for (std::size_t v = 0; v < train.size(); ++v) {
    ViewMetrics vm;
    vm.task = EvalTask::kClassification;
    vm.accuracy = knn_classify(train[v], train_labels, test[v], test_labels, 1);
    report.per_view.push_back(std::move(vm));
  }
  report.best_view = select_best_view(report.per_view);
  return report;
}

EvalReport evaluate_retrieval(const std::vector<Matrix>& queries,
                              std::span<const int> query_labels,
                              const std::vector<Matrix>& gallery,
                              std::span<const int> gallery_labels,
                              const std::vector<int>& cutoffs) {
  if (queries.size() != gallery.size() || queries.empty()) {
    throw DimensionError("evaluate_retrieval: view counts differ");
  }
  EvalReport report;
  report.task = EvalTask::kRetrieval;
  for (std::size_t v = 0; v < queries.size(); ++v) {
    ViewMetrics vm;
    vm.task = EvalTask::kRetrieval;
    vm.retrieval = retrieval_metrics(queries[v], gallery[v], query_labels,
                                     gallery_labels, cutoffs);
    report.per_view.push_back(std::move(vm));
  }
  report.best_view = select_best_view(report.per_view);
  return report;
}

}  // namespace kmsa
