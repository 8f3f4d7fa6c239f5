#pragma once

// Synthetic subjects with planted faults: Gaussian feature blobs per class,
// one tight blob per fault among the mispredicted inputs, and probability
// rows whose uncertainty correlates with misprediction at a chosen level.

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "deepselect/data_model.hpp"
#include "deepselect/manifest.hpp"
#include "deepselect/matrix.hpp"

namespace deepselect {

struct SyntheticParams {
  std::size_t rows = 2000;
  std::size_t classes = 10;
  std::size_t dims = 32;
  std::size_t faults = 20;
  double mispredict_rate = 0.15;
  // Target Pearson correlation between per-input Gini and the misprediction
  // indicator.
  double correlation = 0.5;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
};

struct SyntheticDataset {
  Matrix probabilities;
  Matrix features;
  std::vector<ClassId> labels;
  std::vector<std::pair<InputId, std::int64_t>> clusters;  // mispredicted ids only
  std::size_t mispredicted = 0;
  double achieved_correlation = 0.0;
};

SyntheticDataset generate_synthetic(const SyntheticParams& params);

// Writes probabilities.dsm1, features.dsm1, labels.csv, clusters.csv and
// manifest.json into `directory` (created if needed); returns the manifest.
RunManifest write_synthetic(const SyntheticDataset& dataset, const SyntheticParams& params,
                            const std::filesystem::path& directory, std::size_t budget);

// Pearson correlation of two equally long sequences; 0 when either is
// constant.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace deepselect
