#pragma once

// Objective functions of the selection search: mean Gini uncertainty of a
// subset and its geometric diversity (log-determinant of the Gram matrix of
// the subset's normalized feature rows).

#include <limits>
#include <span>
#include <vector>

#include "deepselect/data_model.hpp"

namespace deepselect {

// Log-domain GD of a subset whose Gram matrix is singular. Compares below
// every finite value and equal to itself.
inline constexpr double kSingularLogGd = -std::numeric_limits<double>::infinity();

// A Cholesky pivot below this (scaled by max(1, largest Gram diagonal)) marks
// the Gram matrix singular.
inline constexpr double kSingularPivot = 1e-12;

struct FitnessPair {
  double gini = 0.0;
  double log_gd = kSingularLogGd;

  friend bool operator==(const FitnessPair&, const FitnessPair&) = default;
};

// 1 - sum p_i^2. Throws ValueError unless `row` is a distribution.
double gini_score(std::span<const double> row);

// Mean Gini score over the subset. Throws EmptySubsetError, IndexError.
double subset_gini(const ProbabilityMatrix& probabilities, std::span<const InputId> subset);

NormalizedFeatureMatrix normalize_features(const FeatureMatrix& features);

// log det(F'_S F'_S^T) when |S| <= d, log det(F'_S^T F'_S) when |S| > d.
// Both are the product of the squared singular values of F'_S, so the two
// branches agree at |S| = d. Returns kSingularLogGd for rank-deficient
// subsets. Throws EmptySubsetError, IndexError, ValueError (repeated id).
double log_geometric_diversity(const NormalizedFeatureMatrix& features, std::span<const InputId> subset);

// log GD(S) - log GD(S \ {member}). Lower means `member` adds less volume.
// When both terms are singular the result is 0.
// Throws MembershipError, IndexError; requires |S| >= 2.
double gd_contribution(const NormalizedFeatureMatrix& features, std::span<const InputId> subset, InputId member);

FitnessPair evaluate_fitness(const ProbabilityMatrix& probabilities, const NormalizedFeatureMatrix& features,
                             std::span<const InputId> subset);

// In-place Cholesky of a symmetric positive semi-definite matrix; returns the
// log-determinant or kSingularLogGd.
double log_det_psd(Matrix& gram);

// Precomputed per-input Gini scores plus the normalized features. The search
// calls these unchecked entry points; ids must be valid and distinct.
class FitnessModel {
 public:
  FitnessModel(const ProbabilityMatrix& probabilities, const NormalizedFeatureMatrix& features);

  std::size_t size() const noexcept { return gini_.size(); }
  double gini(InputId id) const { return gini_[id]; }
  std::span<const double> gini_scores() const noexcept { return gini_; }
  const NormalizedFeatureMatrix& features() const noexcept { return *features_; }

  double mean_gini(std::span<const InputId> subset) const;
  double log_gd(std::span<const InputId> subset) const;
  FitnessPair evaluate(std::span<const InputId> subset) const;
  // Contribution of subset[position].
  double gd_contribution_at(std::span<const InputId> subset, std::size_t position) const;
  // Contributions of every member from a single factorization: -log of the
  // inverse-Gram diagonal when |S| <= d, -log(1 - leverage) when |S| > d.
  // Falls back to gd_contribution_at when the subset itself is singular.
  std::vector<double> gd_contributions(std::span<const InputId> subset) const;

 private:
  std::vector<double> gini_;
  const NormalizedFeatureMatrix* features_;
};

}  // namespace deepselect
