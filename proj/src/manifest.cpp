#include "deepselect/manifest.hpp"

#include "deepselect/error.hpp"
#include "deepselect/matrix_io.hpp"

namespace deepselect {
namespace {

namespace fs = std::filesystem;

fs::path resolve(const nlohmann::json& doc, const char* key, const fs::path& base, bool required) {
  if (!doc.contains(key) || doc[key].is_null()) {
    if (required) throw ConfigError(std::string("manifest is missing \"") + key + "\"");
    return {};
  }
  if (!doc[key].is_string()) throw ConfigError(std::string("manifest field \"") + key + "\" must be a path string");
  const fs::path p = doc[key].get<std::string>();
  return p.is_absolute() ? p : base / p;
}

template <typename T>
std::optional<T> optional_number(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  if (!doc[key].is_number_integer() || doc[key].get<std::int64_t>() < 0) {
    throw ConfigError(std::string("manifest field \"") + key + "\" must be a non-negative integer");
  }
  return doc[key].get<T>();
}

std::string relative_to(const fs::path& p, const fs::path& base) {
  if (p.empty()) return {};
  const fs::path rel = p.lexically_relative(base);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.generic_string();
}

}  // namespace

RunManifest RunManifest::parse(const std::string& text, const fs::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("manifest must be a JSON object");
  RunManifest m;
  m.probabilities = resolve(doc, "probabilities", base_dir, true);
  m.features = resolve(doc, "features", base_dir, true);
  m.labels = resolve(doc, "labels", base_dir, false);
  m.clusters = resolve(doc, "clusters", base_dir, false);
  m.budget = optional_number<std::size_t>(doc, "budget").value_or(0);
  m.seed = optional_number<std::uint64_t>(doc, "seed").value_or(0);
  if (doc.contains("method")) {
    if (!doc["method"].is_string()) throw ConfigError("manifest field \"method\" must be a string");
    m.method = doc["method"].get<std::string>();
  }
  m.total_faults = optional_number<std::size_t>(doc, "total_faults");
  m.rows = optional_number<std::size_t>(doc, "n");
  m.classes = optional_number<std::size_t>(doc, "m");
  m.feature_dims = optional_number<std::size_t>(doc, "d");
  if (doc.contains("search")) {
    if (!doc["search"].is_object()) throw ConfigError("manifest field \"search\" must be an object");
    m.search = doc["search"];
  }
  return m;
}

RunManifest RunManifest::load(const fs::path& path) {
  return parse(io::read_file(path), path.has_parent_path() ? path.parent_path() : fs::path("."));
}

nlohmann::ordered_json RunManifest::to_json(const fs::path& base_dir) const {
  nlohmann::ordered_json doc;
  doc["probabilities"] = relative_to(probabilities, base_dir);
  doc["features"] = relative_to(features, base_dir);
  if (!labels.empty()) doc["labels"] = relative_to(labels, base_dir);
  if (!clusters.empty()) doc["clusters"] = relative_to(clusters, base_dir);
  doc["budget"] = budget;
  doc["seed"] = seed;
  doc["method"] = method;
  if (total_faults) doc["total_faults"] = *total_faults;
  if (rows) doc["n"] = *rows;
  if (classes) doc["m"] = *classes;
  if (feature_dims) doc["d"] = *feature_dims;
  if (!search.empty()) doc["search"] = search;
  return doc;
}

void RunManifest::save(const fs::path& path) const {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  io::write_file(path, to_json(base).dump(2) + "\n");
}

RunData::RunData(const RunManifest& manifest)
    : manifest_(manifest),
      probabilities_(load_probability_matrix(manifest.probabilities)),
      features_(load_feature_matrix(manifest.features)),
      normalized_(normalize_features(features_)) {
  const std::size_t n = probabilities_.rows();
  if (features_.rows() != n) {
    throw ShapeError("feature matrix has " + std::to_string(features_.rows()) + " rows, probability matrix has " +
                     std::to_string(n));
  }
  auto check_declared = [](const std::optional<std::size_t>& declared, std::size_t actual, const char* what) {
    if (declared && *declared != actual) {
      throw ShapeError(std::string("manifest declares ") + what + " = " + std::to_string(*declared) +
                       ", files have " + std::to_string(actual));
    }
  };
  check_declared(manifest.rows, n, "n");
  check_declared(manifest.classes, probabilities_.classes(), "m");
  check_declared(manifest.feature_dims, features_.cols(), "d");

  if (!manifest.labels.empty()) {
    labels_.emplace(load_labels(manifest.labels, n, probabilities_.classes()));
    mispredicted_ = misprediction_mask(probabilities_, *labels_);
  }
  if (!manifest.clusters.empty()) {
    if (!labels_) throw ConfigError("cluster labels need ground-truth labels to identify mispredictions");
    faults_.emplace(FaultPartition::from_labels(io::read_id_values(manifest.clusters), mispredicted_,
                                                manifest.total_faults));
  }
}

const GroundTruthLabels& RunData::labels() const {
  if (!labels_) throw ConfigError("manifest names no label file");
  return *labels_;
}

const std::vector<bool>& RunData::mispredicted() const {
  if (!labels_) throw ConfigError("manifest names no label file");
  return mispredicted_;
}

const FaultPartition& RunData::faults() const {
  if (!faults_) throw ConfigError("manifest names no cluster file");
  return *faults_;
}

}  // namespace deepselect
