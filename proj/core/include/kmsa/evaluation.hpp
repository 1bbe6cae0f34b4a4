#ifndef KMSA_EVALUATION_HPP
#define KMSA_EVALUATION_HPP

#include "kmsa/types.hpp"

#include <span>
#include <vector>

namespace kmsa {

/// Fraction of test columns whose k nearest training columns (Euclidean,
/// ties by lower training index) vote for the true label. Vote ties go to
/// the label of the nearest voter.
double knn_classify(const Matrix& train, std::span<const int> train_labels,
                    const Matrix& test, std::span<const int> test_labels,
                    int k = 1);

/// Precision at every relevant rank, averaged over the relevant ranks.
/// `relevant` is the relevance of the ranked list; returns 0 when nothing
/// is relevant.
double average_precision(const std::vector<bool>& relevant);

/// Sum of absolute coordinate differences.
double l1_distance(const Eigen::Ref<const Vector>& a,
                   const Eigen::Ref<const Vector>& b);

struct RetrievalMetrics {
  std::vector<int> cutoffs;
  std::vector<double> precision;  // mean over queries, per cutoff
  std::vector<double> recall;
  std::vector<double> f1;         // from the mean precision and recall
  double mean_average_precision = 0.0;
  std::vector<double> average_precisions;  // per query
};

/// Ranks the gallery for each query by l1 distance (ties by lower gallery
/// index). Cutoffs above the gallery size are clamped to it. Throws
/// EvalError when a query's class has no gallery member.
RetrievalMetrics retrieval_metrics(const Matrix& queries, const Matrix& gallery,
                                   std::span<const int> query_labels,
                                   std::span<const int> gallery_labels,
                                   const std::vector<int>& cutoffs);

enum class EvalTask { kClassification, kRetrieval };

const char* to_string(EvalTask task);

struct ViewMetrics {
  double accuracy = 0.0;        // classification
  RetrievalMetrics retrieval;   // retrieval
  double score() const;         // accuracy or mAP
  EvalTask task = EvalTask::kClassification;
};

struct EvalReport {
  EvalTask task = EvalTask::kClassification;
  std::vector<ViewMetrics> per_view;
  int best_view = 0;

  const ViewMetrics& best() const {
    return per_view.at(static_cast<std::size_t>(best_view));
  }
};

/// Index of the highest-scoring view, lowest index on ties.
int select_best_view(const std::vector<ViewMetrics>& per_view);

/// 1NN on each view's embedding; train/test are d x N per view.
EvalReport evaluate_classification(const std::vector<Matrix>& train,
                                   std::span<const int> train_labels,
                                   const std::vector<Matrix>& test,
                                   std::span<const int> test_labels);

EvalReport evaluate_retrieval(const std::vector<Matrix>& queries,
                              std::span<const int> query_labels,
                              const std::vector<Matrix>& gallery,
                              std::span<const int> gallery_labels,
                              const std::vector<int>& cutoffs);

}  // namespace kmsa

#endif  // KMSA_EVALUATION_HPP
