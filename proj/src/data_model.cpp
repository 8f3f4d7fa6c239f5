#include "deepselect/data_model.hpp"

#include <cmath>
#include <set>

#include "deepselect/error.hpp"
#include "deepselect/matrix_io.hpp"

namespace deepselect {

ProbabilityMatrix ProbabilityMatrix::from_matrix(Matrix values) {
  if (values.rows() < 1) throw ShapeError("probability matrix needs at least one row");
  if (values.cols() < 2) throw ShapeError("probability matrix needs at least two classes");
  for (std::size_t i = 0; i < values.rows(); ++i) {
    auto row = values.row(i);
    double total = 0.0;
    for (const double p : row) {
      if (!std::isfinite(p) || p < -kProbabilityRangeSlack || p > 1.0 + kProbabilityRangeSlack) {
        throw ValueError("row " + std::to_string(i) + ": probability outside [0, 1]");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kRowSumTolerance) {
      throw StochasticityError("row " + std::to_string(i) + " sums to " + io::format_double(total));
    }
    if (total != 1.0) {
      for (double& p : row) p /= total;
    }
  }
  return ProbabilityMatrix(std::move(values));
}

FeatureMatrix FeatureMatrix::from_matrix(Matrix values) {
  if (values.rows() < 1 || values.cols() < 1) throw ShapeError("feature matrix is empty");
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (const double v : values.row(i)) {
      if (!std::isfinite(v)) throw ValueError("row " + std::to_string(i) + ": non-finite feature value");
    }
  }
  return FeatureMatrix(std::move(values));
}

GroundTruthLabels::GroundTruthLabels(std::vector<ClassId> labels, std::size_t classes) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= classes) {
      throw ValueError("input " + std::to_string(i) + " has class " + std::to_string(labels_[i]) + " outside [0, " +
                       std::to_string(classes) + ")");
    }
  }
}

FaultPartition FaultPartition::from_labels(const std::vector<std::pair<InputId, std::int64_t>>& labels,
                                           const std::vector<bool>& mispredicted,
                                           std::optional<std::size_t> total_faults_override) {
  FaultPartition partition;
  std::set<std::int64_t> clusters;
  for (const auto& [id, cluster] : labels) {
    if (id >= mispredicted.size()) throw IndexError("cluster label for unknown input " + std::to_string(id));
    if (!mispredicted[id]) {
      throw ValidationError("cluster label given for correctly predicted input " + std::to_string(id));
    }
    if (cluster < kNoiseCluster) throw ValueError("cluster id " + std::to_string(cluster) + " is invalid");
    if (!partition.cluster_of.emplace(id, cluster).second) {
      throw ValidationError("duplicate cluster label for input " + std::to_string(id));
    }
    if (cluster != kNoiseCluster) clusters.insert(cluster);
  }
  partition.total_faults = total_faults_override.value_or(clusters.size());
  return partition;
}

ClassId predicted_class(const ProbabilityMatrix& probabilities, InputId i) {
  if (i >= probabilities.rows()) throw IndexError("input id " + std::to_string(i) + " out of range");
  const auto row = probabilities.row(i);
  ClassId best = 0;
  for (ClassId c = 1; c < row.size(); ++c) {
    if (row[c] > row[best]) best = c;
  }
  return best;
}

std::vector<bool> misprediction_mask(const ProbabilityMatrix& probabilities, const GroundTruthLabels& labels) {
  if (labels.size() != probabilities.rows()) {
    throw ShapeError("label count " + std::to_string(labels.size()) + " does not match " +
                     std::to_string(probabilities.rows()) + " probability rows");
  }
  std::vector<bool> mask(labels.size());
  for (InputId i = 0; i < labels.size(); ++i) mask[i] = predicted_class(probabilities, i) != labels[i];
  return mask;
}

ProbabilityMatrix load_probability_matrix(const std::filesystem::path& path) {
  return ProbabilityMatrix::from_matrix(io::read_matrix(path));
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  return FeatureMatrix::from_matrix(io::read_matrix(path));
}

GroundTruthLabels load_labels(const std::filesystem::path& path, std::size_t rows, std::size_t classes) {
  const auto entries = io::read_id_values(path);
  if (entries.size() != rows) {
    throw ShapeError("label file has " + std::to_string(entries.size()) + " rows, expected " + std::to_string(rows));
  }
  std::vector<ClassId> labels(rows);
  std::vector<bool> seen(rows, false);
  for (const auto& [id, value] : entries) {
    if (id >= rows) throw IndexError("label for unknown input " + std::to_string(id));
    if (seen[id]) throw ShapeError("duplicate label for input " + std::to_string(id));
    if (value < 0) throw ValueError("negative class label for input " + std::to_string(id));
    seen[id] = true;
    labels[id] = static_cast<ClassId>(value);
  }
  return GroundTruthLabels(std::move(labels), classes);
}

}  // namespace deepselect
