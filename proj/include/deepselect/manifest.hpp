#pragma once

// Run manifest: a JSON document naming the matrices and label files of one
// subject plus the selection parameters. Relative paths resolve against the
// manifest's directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepselect/data_model.hpp"
#include "deepselect/fitness.hpp"

namespace deepselect {

struct RunManifest {
  std::filesystem::path probabilities;
  std::filesystem::path features;
  std::filesystem::path labels;    // optional for selection
  std::filesystem::path clusters;  // optional for selection
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  std::string method = "deepgd";
  std::optional<std::size_t> total_faults;
  // Declared shapes, checked against the loaded files when present.
  std::optional<std::size_t> rows;
  std::optional<std::size_t> classes;
  std::optional<std::size_t> feature_dims;
  // Free-form search overrides (population_size, generations, ...).
  nlohmann::json search = nlohmann::json::object();

  // Throws IoError, ConfigError on missing/ill-typed fields.
  static RunManifest load(const std::filesystem::path& path);
  static RunManifest parse(const std::string& text, const std::filesystem::path& base_dir);

  // Paths are written relative to `base_dir` when they live beneath it.
  nlohmann::ordered_json to_json(const std::filesystem::path& base_dir) const;
  void save(const std::filesystem::path& path) const;
};

// Every file of a manifest, loaded and cross-validated.
class RunData {
 public:
  // Labels and clusters are loaded only when the manifest names them.
  // Throws ShapeError when declared or paired shapes disagree.
  explicit RunData(const RunManifest& manifest);

  const RunManifest& manifest() const noexcept { return manifest_; }
  const ProbabilityMatrix& probabilities() const noexcept { return probabilities_; }
  const FeatureMatrix& features() const noexcept { return features_; }
  const NormalizedFeatureMatrix& normalized() const noexcept { return normalized_; }
  std::size_t rows() const noexcept { return probabilities_.rows(); }

  bool has_labels() const noexcept { return labels_.has_value(); }
  bool has_faults() const noexcept { return faults_.has_value(); }
  // Throw ConfigError when the manifest named no labels / clusters.
  const GroundTruthLabels& labels() const;
  const std::vector<bool>& mispredicted() const;
  const FaultPartition& faults() const;

 private:
  RunManifest manifest_;
  ProbabilityMatrix probabilities_;
  FeatureMatrix features_;
  NormalizedFeatureMatrix normalized_;
  std::optional<GroundTruthLabels> labels_;
  std::vector<bool> mispredicted_;
  std::optional<FaultPartition> faults_;
};

}  // namespace deepselect
