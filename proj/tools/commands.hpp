#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace deepselect::cli {

struct SelectOptions {
  std::filesystem::path manifest;
  std::string method;  // empty: manifest's method
  std::optional<std::size_t> budget;  // unset: manifest's budget
  std::optional<std::uint64_t> seed;  // unset: manifest's seed
  std::string profile;  // empty: manifest's search block, else paper
  std::string variant;
  std::filesystem::path out = "selection.csv";
  bool verbose = false;
};

struct EvaluateOptions {
  std::filesystem::path selection;
  std::filesystem::path manifest;
  std::filesystem::path out;  // empty: stdout
};

struct CompareOptions {
  std::filesystem::path manifest;
  std::vector<std::string> methods{"deepgd", "random", "gini", "maxp"};
  std::size_t repeats = 10;
  std::optional<std::size_t> budget;
  std::optional<std::uint64_t> seed;
  std::string profile;
  std::filesystem::path out_csv = "compare.csv";
  std::filesystem::path out_json = "compare.json";
};

struct ClusterOptions {
  std::filesystem::path manifest;
  double eps = 0.5;
  std::size_t min_points = 3;
  double class_weight = 1.0;
  std::filesystem::path out = "clusters.csv";
};

struct ValidateOptions {
  std::filesystem::path manifest;
};

struct SyntheticOptions {
  std::size_t n = 2000;
  std::size_t m = 10;
  std::size_t d = 32;
  std::size_t faults = 20;
  double mispredict_rate = 0.15;
  double correlation = 0.5;
  std::uint64_t seed = 0;
  std::size_t budget = 100;
  std::filesystem::path out = "synthetic";
};

int run_select(const SelectOptions& options);
int run_evaluate(const EvaluateOptions& options);
int run_compare(const CompareOptions& options);
int run_cluster_faults(const ClusterOptions& options);
int run_validate(const ValidateOptions& options);
int run_gen_synthetic(const SyntheticOptions& options);

}  // namespace deepselect::cli
