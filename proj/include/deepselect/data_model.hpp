#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "deepselect/matrix.hpp"

namespace deepselect {

// 0-based row index shared by every matrix and label file of a run.
using InputId = std::size_t;
using ClassId = std::size_t;

inline constexpr double kRowSumTolerance = 1e-5;
inline constexpr double kProbabilityRangeSlack = 1e-9;

// n x m row-stochastic matrix of classifier outputs.
class ProbabilityMatrix {
 public:
  // Validates and renormalizes rows whose sum is within kRowSumTolerance of 1.
  // Throws ShapeError, ValueError or StochasticityError.
  static ProbabilityMatrix from_matrix(Matrix values);

  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t classes() const noexcept { return values_.cols(); }
  std::span<const double> row(InputId i) const { return values_.row(i); }
  const Matrix& matrix() const noexcept { return values_; }

 private:
  explicit ProbabilityMatrix(Matrix values) : values_(std::move(values)) {}
  Matrix values_;
};

// n x d raw per-input feature vectors, all finite.
class FeatureMatrix {
 public:
  static FeatureMatrix from_matrix(Matrix values);

  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }
  std::span<const double> row(InputId i) const { return values_.row(i); }
  const Matrix& matrix() const noexcept { return values_; }

 private:
  explicit FeatureMatrix(Matrix values) : values_(std::move(values)) {}
  Matrix values_;
};

// Column-wise min-max scaled features in [0, 1]. Built by normalize_features.
class NormalizedFeatureMatrix {
 public:
  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }
  std::span<const double> row(InputId i) const { return values_.row(i); }
  const Matrix& matrix() const noexcept { return values_; }

 private:
  friend NormalizedFeatureMatrix normalize_features(const FeatureMatrix& features);
  explicit NormalizedFeatureMatrix(Matrix values) : values_(std::move(values)) {}
  Matrix values_;
};

// Ground-truth class per input.
class GroundTruthLabels {
 public:
  // Throws ShapeError on length mismatch, ValueError on out-of-range class.
  GroundTruthLabels(std::vector<ClassId> labels, std::size_t classes);

  std::size_t size() const noexcept { return labels_.size(); }
  ClassId operator[](InputId i) const { return labels_[i]; }
  std::span<const ClassId> values() const noexcept { return labels_; }

 private:
  std::vector<ClassId> labels_;
};

inline constexpr std::int64_t kNoiseCluster = -1;

// Fault cluster per mispredicted input; -1 marks noise.
struct FaultPartition {
  std::map<InputId, std::int64_t> cluster_of;
  std::size_t total_faults = 0;

  // total_faults defaults to the number of distinct non-noise clusters.
  // Throws ValueError for cluster ids below -1 and ValidationError when a
  // labelled id is not mispredicted.
  static FaultPartition from_labels(const std::vector<std::pair<InputId, std::int64_t>>& labels,
                                    const std::vector<bool>& mispredicted,
                                    std::optional<std::size_t> total_faults_override = std::nullopt);
};

// Smallest class index attaining the row maximum.
ClassId predicted_class(const ProbabilityMatrix& probabilities, InputId i);

std::vector<bool> misprediction_mask(const ProbabilityMatrix& probabilities, const GroundTruthLabels& labels);

ProbabilityMatrix load_probability_matrix(const std::filesystem::path& path);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);
GroundTruthLabels load_labels(const std::filesystem::path& path, std::size_t rows, std::size_t classes);

}  // namespace deepselect
