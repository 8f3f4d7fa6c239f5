#include "deepselect/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "deepselect/error.hpp"
#include "deepselect/fitness.hpp"
#include "deepselect/kernels.hpp"

namespace deepselect {

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json out;
  out["method"] = report.method;
  out["budget"] = report.budget;
  out["fdr"] = report.fdr;
  out["faults_revealed"] = report.faults_revealed;
  out["total_faults"] = report.total_faults;
  out["mispredictions"] = report.mispredictions;
  if (std::isfinite(report.log_gd)) {
    out["log_gd"] = report.log_gd;
  } else {
    out["log_gd"] = nullptr;
  }
  out["seed"] = report.seed;
  return out;
}

std::set<std::int64_t> faults_revealed(std::span<const InputId> subset, const std::vector<bool>& mispredicted,
                                       const FaultPartition& faults) {
  std::set<std::int64_t> revealed;
  for (const InputId id : subset) {
    if (id >= mispredicted.size()) throw IndexError("selected id " + std::to_string(id) + " out of range");
    if (!mispredicted[id]) continue;
    const auto it = faults.cluster_of.find(id);
    if (it == faults.cluster_of.end()) {
      throw CoverageError("mispredicted input " + std::to_string(id) + " has no cluster label");
    }
    if (it->second != kNoiseCluster) revealed.insert(it->second);
  }
  return revealed;
}

double fault_detection_rate(std::span<const InputId> subset, const std::vector<bool>& mispredicted,
                            const FaultPartition& faults) {
  if (faults.total_faults == 0) throw ConfigError("total fault count is zero");
  if (subset.empty()) throw EmptySubsetError("cannot score an empty selection");
  const auto revealed = faults_revealed(subset, mispredicted, faults);
  const std::size_t attainable = std::min(subset.size(), faults.total_faults);
  return static_cast<double>(revealed.size()) / static_cast<double>(attainable);
}

std::size_t count_mispredictions(std::span<const InputId> subset, const std::vector<bool>& mispredicted) {
  return static_cast<std::size_t>(
      std::count_if(subset.begin(), subset.end(), [&](InputId id) { return mispredicted.at(id); }));
}

double selection_diversity(const NormalizedFeatureMatrix& features, std::span<const InputId> subset) {
  return log_geometric_diversity(features, subset);
}

EvalReport evaluate_selection(const SelectionResult& selection, const std::vector<bool>& mispredicted,
                              const FaultPartition& faults, const NormalizedFeatureMatrix& features) {
  selection.validate(mispredicted.size());
  EvalReport report;
  report.method = selection.method;
  report.budget = selection.budget;
  report.seed = selection.seed;
  report.total_faults = faults.total_faults;
  report.faults_revealed = faults_revealed(selection.subset, mispredicted, faults).size();
  report.fdr = fault_detection_rate(selection.subset, mispredicted, faults);
  report.mispredictions = count_mispredictions(selection.subset, mispredicted);
  report.log_gd = selection_diversity(features, selection.subset);
  return report;
}

std::vector<std::int64_t> dbscan_cluster(const Matrix& points, double eps, std::size_t min_points) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValueError("eps must be a positive finite distance");
  if (min_points == 0) throw ValueError("min_points must be at least 1");
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  const double eps_sq = eps * eps;
  constexpr std::int64_t kUnvisited = -2;

  auto neighbours = [&](std::size_t p) {
    std::vector<std::size_t> out;
    const double* row = points.row(p).data();
    for (std::size_t q = 0; q < n; ++q) {
      if (kernels::squared_distance(row, points.row(q).data(), d) <= eps_sq) out.push_back(q);
    }
    return out;
  };

  std::vector<std::int64_t> labels(n, kUnvisited);
  std::int64_t next_cluster = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (labels[p] != kUnvisited) continue;
    const auto seeds = neighbours(p);
    if (seeds.size() < min_points) {
      labels[p] = kNoiseCluster;
      continue;
    }
    const std::int64_t cluster = next_cluster++;
    labels[p] = cluster;
    std::deque<std::size_t> frontier(seeds.begin(), seeds.end());
    while (!frontier.empty()) {
      const std::size_t q = frontier.front();
      frontier.pop_front();
      if (labels[q] == kNoiseCluster) labels[q] = cluster;  // border point
      if (labels[q] != kUnvisited) continue;
      labels[q] = cluster;
      const auto reach = neighbours(q);
      if (reach.size() >= min_points) frontier.insert(frontier.end(), reach.begin(), reach.end());
    }
  }
  return labels;
}

FaultFeatures build_fault_features(const NormalizedFeatureMatrix& features, const GroundTruthLabels& labels,
                                   const ProbabilityMatrix& probabilities, const std::vector<bool>& mispredicted,
                                   double class_weight) {
  const std::size_t n = features.rows();
  if (labels.size() != n || probabilities.rows() != n || mispredicted.size() != n) {
    throw ShapeError("features, labels, probabilities and mask must describe the same inputs");
  }
  const std::size_t d = features.cols();
  const double scale = class_weight / static_cast<double>(probabilities.classes() - 1);
  FaultFeatures out;
  for (InputId i = 0; i < n; ++i) {
    if (mispredicted[i]) out.ids.push_back(i);
  }
  out.rows = Matrix(out.ids.size(), d + 2);
  for (std::size_t r = 0; r < out.ids.size(); ++r) {
    const InputId id = out.ids[r];
    auto dst = out.rows.row(r);
    std::copy_n(features.row(id).begin(), d, dst.begin());
    dst[d] = scale * static_cast<double>(labels[id]);
    dst[d + 1] = scale * static_cast<double>(predicted_class(probabilities, id));
  }
  return out;
}

}  // namespace deepselect
