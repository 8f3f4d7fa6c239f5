#pragma once

// Scoring of selections against fault clusters, plus a density clusterer
// that estimates faults when no external cluster labels are available.

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepselect/data_model.hpp"
#include "deepselect/selection.hpp"

namespace deepselect {

struct EvalReport {
  std::string method;
  std::size_t budget = 0;
  double fdr = 0.0;
  std::size_t faults_revealed = 0;
  std::size_t total_faults = 0;
  std::size_t mispredictions = 0;
  double log_gd = kSingularLogGd;
  std::uint64_t seed = 0;
};

nlohmann::ordered_json to_json(const EvalReport& report);

// Distinct non-noise clusters among the mispredicted members of `subset`.
// Throws CoverageError when a mispredicted member has no cluster label.
std::set<std::int64_t> faults_revealed(std::span<const InputId> subset, const std::vector<bool>& mispredicted,
                                       const FaultPartition& faults);

// |faults revealed| / min(|subset|, total faults). Throws ConfigError when
// the partition has no faults.
double fault_detection_rate(std::span<const InputId> subset, const std::vector<bool>& mispredicted,
                            const FaultPartition& faults);

std::size_t count_mispredictions(std::span<const InputId> subset, const std::vector<bool>& mispredicted);

// log GD of the selection.
double selection_diversity(const NormalizedFeatureMatrix& features, std::span<const InputId> subset);

EvalReport evaluate_selection(const SelectionResult& selection, const std::vector<bool>& mispredicted,
                              const FaultPartition& faults, const NormalizedFeatureMatrix& features);

// DBSCAN over the rows of `points` with Euclidean distance. A point is core
// when at least `min_points` points (itself included) lie within `eps`.
// Clusters are numbered 0, 1, ... in order of their first core point;
// unreachable points are kNoiseCluster. Throws ValueError on eps <= 0 or
// min_points == 0.
std::vector<std::int64_t> dbscan_cluster(const Matrix& points, double eps, std::size_t min_points);

struct FaultFeatures {
  std::vector<InputId> ids;
  Matrix rows;
};

// For every mispredicted input: its normalized feature row followed by
// class_weight * actual / (m - 1) and class_weight * predicted / (m - 1).
FaultFeatures build_fault_features(const NormalizedFeatureMatrix& features, const GroundTruthLabels& labels,
                                   const ProbabilityMatrix& probabilities, const std::vector<bool>& mispredicted,
                                   double class_weight = 1.0);

}  // namespace deepselect
