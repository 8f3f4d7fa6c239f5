#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "deepselect/data_model.hpp"
#include "deepselect/fitness.hpp"
#include "deepselect/matrix.hpp"
#include "deepselect/rng.hpp"

namespace deepselect::testing {

using Rows = std::vector<std::vector<double>>;

inline Matrix from_rows(const Rows& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<double> values;
  for (const auto& row : rows) values.insert(values.end(), row.begin(), row.end());
  return Matrix(rows.size(), cols, std::move(values));
}

inline ProbabilityMatrix probs(const Rows& rows) { return ProbabilityMatrix::from_matrix(from_rows(rows)); }

// Normalized features equal to `rows` (values must lie in [0, 1]): an all-zero
// and an all-one row are appended so min-max scaling is the identity. The
// anchors get ids rows.size() and rows.size() + 1.
inline NormalizedFeatureMatrix unit_features(Rows rows) {
  const std::size_t d = rows.front().size();
  rows.emplace_back(d, 0.0);
  rows.emplace_back(d, 1.0);
  return normalize_features(FeatureMatrix::from_matrix(from_rows(rows)));
}

// Probability rows of the given width with matching anchors, so a
// ProbabilityMatrix can pair with unit_features().
inline Rows with_anchor_rows(Rows rows) {
  const std::size_t m = rows.front().size();
  std::vector<double> one_hot(m, 0.0);
  one_hot[0] = 1.0;
  rows.push_back(one_hot);
  rows.push_back(one_hot);
  return rows;
}

inline std::vector<double> random_distribution(Rng& rng, std::size_t m) {
  std::vector<double> row(m);
  double total = 0.0;
  for (double& p : row) {
    p = rng.uniform01() + 1e-3;
    total += p;
  }
  for (double& p : row) p /= total;
  return row;
}

inline ProbabilityMatrix random_probabilities(Rng& rng, std::size_t n, std::size_t m) {
  Rows rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(random_distribution(rng, m));
  return probs(rows);
}

inline NormalizedFeatureMatrix random_features(Rng& rng, std::size_t n, std::size_t d) {
  Rows rows(n, std::vector<double>(d));
  for (auto& row : rows) {
    for (double& v : row) v = rng.normal();
  }
  return normalize_features(FeatureMatrix::from_matrix(from_rows(rows)));
}

// Determinant by Laplace expansion along the first row.
inline double cofactor_det(const Rows& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1.0;
  if (n == 1) return a[0][0];
  double det = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    Rows minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(a[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const double sign = col % 2 == 0 ? 1.0 : -1.0;
    det += sign * a[0][col] * cofactor_det(minor);
  }
  return det;
}

// Gram F_S F_S^T when |S| <= d, otherwise the d x d scatter F_S^T F_S.
inline Rows gram_oracle(const NormalizedFeatureMatrix& features, std::span<const InputId> subset) {
  const std::size_t k = subset.size();
  const std::size_t d = features.cols();
  if (k <= d) {
    Rows g(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t t = 0; t < d; ++t) g[i][j] += features.row(subset[i])[t] * features.row(subset[j])[t];
      }
    }
    return g;
  }
  Rows g(d, std::vector<double>(d, 0.0));
  for (const InputId id : subset) {
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = 0; q < d; ++q) g[p][q] += features.row(id)[p] * features.row(id)[q];
    }
  }
  return g;
}

inline double oracle_log_gd(const NormalizedFeatureMatrix& features, std::span<const InputId> subset) {
  const double det = cofactor_det(gram_oracle(features, subset));
  if (!(det > 1e-12)) return -std::numeric_limits<double>::infinity();
  return std::log(det);
}

inline double oracle_gini(std::span<const double> row) {
  double squares = 0.0;
  for (const double p : row) squares += p * p;
  return 1.0 - squares;
}

inline bool close_relative(double actual, double expected, double tolerance) {
  if (std::isinf(expected) || std::isinf(actual)) return actual == expected;
  return std::abs(actual - expected) <= tolerance * std::max(1.0, std::abs(expected));
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("deepselect_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace deepselect::testing
