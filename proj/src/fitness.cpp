#include "deepselect/fitness.hpp"

#include <algorithm>
#include <cmath>

#include "deepselect/error.hpp"
#include "deepselect/kernels.hpp"

namespace deepselect {
namespace {

void check_subset(std::size_t rows, std::span<const InputId> subset) {
  if (subset.empty()) throw EmptySubsetError("subset is empty");
  std::vector<InputId> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() >= rows) throw IndexError("input id " + std::to_string(sorted.back()) + " out of range");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValueError("subset contains a repeated input id");
  }
}

double unchecked_log_gd(const NormalizedFeatureMatrix& features, std::span<const InputId> subset) {
  const std::size_t k = subset.size();
  const std::size_t d = features.cols();
  if (k == 0) return 0.0;
  if (k <= d) {
    Matrix gram(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      const double* fi = features.row(subset[i]).data();
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = kernels::dot(fi, features.row(subset[j]).data(), d);
        gram(i, j) = v;
        gram(j, i) = v;
      }
    }
    return log_det_psd(gram);
  }
  Matrix scatter(d, d);
  for (const InputId id : subset) {
    const auto f = features.row(id);
    for (std::size_t p = 0; p < d; ++p) {
      if (f[p] != 0.0) kernels::axpy(f[p], f.data(), scatter.row(p).data(), d);
    }
  }
  return log_det_psd(scatter);
}

// Removing a member from an already degenerate subset that stays degenerate
// changes nothing: 0. Removing the member that caused the degeneracy gives
// -inf - finite = -inf, which ranks it first for replacement.
double contribution(double with, double without) {
  if (with == kSingularLogGd && without == kSingularLogGd) return 0.0;
  return with - without;
}

}  // namespace

double gini_score(std::span<const double> row) {
  if (row.size() < 2) throw ValueError("distribution needs at least two classes");
  double total = 0.0;
  for (const double p : row) {
    if (!std::isfinite(p) || p < -kProbabilityRangeSlack || p > 1.0 + kProbabilityRangeSlack) {
      throw ValueError("probability outside [0, 1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kRowSumTolerance) throw ValueError("probabilities do not sum to 1");
  return 1.0 - kernels::dot(row.data(), row.data(), row.size());
}

double subset_gini(const ProbabilityMatrix& probabilities, std::span<const InputId> subset) {
  check_subset(probabilities.rows(), subset);
  double total = 0.0;
  for (const InputId id : subset) total += gini_score(probabilities.row(id));
  return total / static_cast<double>(subset.size());
}

NormalizedFeatureMatrix normalize_features(const FeatureMatrix& features) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = features.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], row[j]);
      hi[j] = std::max(hi[j], row[j]);
    }
  }
  Matrix scaled(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = features.row(i);
    auto dst = scaled.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double range = hi[j] - lo[j];
      dst[j] = range > 0.0 ? (src[j] - lo[j]) / range : 0.0;
    }
  }
  return NormalizedFeatureMatrix(std::move(scaled));
}

double log_det_psd(Matrix& gram) {
  const std::size_t k = gram.rows();
  if (k != gram.cols()) throw ShapeError("Gram matrix must be square");
  double max_diag = 1.0;
  for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, gram(i, i));
  const double threshold = kSingularPivot * max_diag;

  // Row-oriented Cholesky; L overwrites the lower triangle.
  double log_det = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double* li = gram.row(i).data();
    for (std::size_t j = 0; j < i; ++j) {
      const double* lj = gram.row(j).data();
      li[j] = (li[j] - kernels::dot(li, lj, j)) / lj[j];
    }
    const double pivot = li[i] - kernels::dot(li, li, i);
    if (!(pivot >= threshold)) return kSingularLogGd;
    li[i] = std::sqrt(pivot);
    log_det += std::log(pivot);
  }
  return log_det;
}

double log_geometric_diversity(const NormalizedFeatureMatrix& features, std::span<const InputId> subset) {
  check_subset(features.rows(), subset);
  return unchecked_log_gd(features, subset);
}

double gd_contribution(const NormalizedFeatureMatrix& features, std::span<const InputId> subset, InputId member) {
  check_subset(features.rows(), subset);
  if (subset.size() < 2) throw ValueError("diversity contribution needs at least two inputs");
  const auto it = std::find(subset.begin(), subset.end(), member);
  if (it == subset.end()) throw MembershipError("input " + std::to_string(member) + " is not in the subset");
  std::vector<InputId> rest;
  rest.reserve(subset.size() - 1);
  for (const InputId id : subset) {
    if (id != member) rest.push_back(id);
  }
  return contribution(unchecked_log_gd(features, subset), unchecked_log_gd(features, rest));
}

FitnessPair evaluate_fitness(const ProbabilityMatrix& probabilities, const NormalizedFeatureMatrix& features,
                             std::span<const InputId> subset) {
  if (probabilities.rows() != features.rows()) throw ShapeError("probability and feature row counts differ");
  return {subset_gini(probabilities, subset), log_geometric_diversity(features, subset)};
}

FitnessModel::FitnessModel(const ProbabilityMatrix& probabilities, const NormalizedFeatureMatrix& features)
    : gini_(probabilities.rows()), features_(&features) {
  if (probabilities.rows() != features.rows()) {
    throw ShapeError("probability matrix has " + std::to_string(probabilities.rows()) + " rows, features have " +
                     std::to_string(features.rows()));
  }
  for (InputId i = 0; i < gini_.size(); ++i) gini_[i] = gini_score(probabilities.row(i));
}

double FitnessModel::mean_gini(std::span<const InputId> subset) const {
  double total = 0.0;
  for (const InputId id : subset) total += gini_[id];
  return total / static_cast<double>(subset.size());
}

double FitnessModel::log_gd(std::span<const InputId> subset) const { return unchecked_log_gd(*features_, subset); }

FitnessPair FitnessModel::evaluate(std::span<const InputId> subset) const {
  return {mean_gini(subset), log_gd(subset)};
}

double FitnessModel::gd_contribution_at(std::span<const InputId> subset, std::size_t position) const {
  std::vector<InputId> rest;
  rest.reserve(subset.size() - 1);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i != position) rest.push_back(subset[i]);
  }
  return contribution(log_gd(subset), log_gd(rest));
}

std::vector<double> FitnessModel::gd_contributions(std::span<const InputId> subset) const {
  const std::size_t k = subset.size();
  const std::size_t d = features_->cols();
  std::vector<double> out(k);
  auto direct = [&] {
    for (std::size_t i = 0; i < k; ++i) out[i] = gd_contribution_at(subset, i);
    return out;
  };
  if (k < 2) throw ValueError("diversity contribution needs at least two inputs");

  if (k <= d) {
    Matrix gram(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      const double* fi = features_->row(subset[i]).data();
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = kernels::dot(fi, features_->row(subset[j]).data(), d);
        gram(i, j) = v;
        gram(j, i) = v;
      }
    }
    if (log_det_psd(gram) == kSingularLogGd) return direct();
    // det(G) / det(G without i) = 1 / (G^-1)_ii, and (G^-1)_ii is the squared
    // norm of column i of L^-1.
    std::vector<double> column(k);
    for (std::size_t i = 0; i < k; ++i) {
      column[i] = 1.0 / gram(i, i);
      double norm = column[i] * column[i];
      for (std::size_t r = i + 1; r < k; ++r) {
        const double* lr = gram.row(r).data();
        column[r] = -kernels::dot(lr + i, column.data() + i, r - i) / lr[r];
        norm += column[r] * column[r];
      }
      out[i] = -std::log(norm);
    }
    return out;
  }

  Matrix scatter(d, d);
  for (const InputId id : subset) {
    const auto f = features_->row(id);
    for (std::size_t p = 0; p < d; ++p) {
      if (f[p] != 0.0) kernels::axpy(f[p], f.data(), scatter.row(p).data(), d);
    }
  }
  if (log_det_psd(scatter) == kSingularLogGd) return direct();
  // det(A - f f^T) = det(A) (1 - f^T A^-1 f).
  std::vector<double> y(d);
  for (std::size_t i = 0; i < k; ++i) {
    const auto f = features_->row(subset[i]);
    for (std::size_t r = 0; r < d; ++r) {
      const double* lr = scatter.row(r).data();
      y[r] = (f[r] - kernels::dot(lr, y.data(), r)) / lr[r];
    }
    const double remaining = 1.0 - kernels::dot(y.data(), y.data(), d);
    out[i] = remaining > kSingularPivot ? -std::log(remaining) : std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace deepselect
