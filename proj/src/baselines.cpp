#include "deepselect/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "deepselect/error.hpp"
#include "deepselect/fitness.hpp"

namespace deepselect {
namespace {

void check_budget(std::size_t rows, std::size_t budget) {
  if (budget < 1) throw BudgetError("budget must be at least 1");
  if (budget > rows) {
    throw BudgetError("budget " + std::to_string(budget) + " exceeds dataset size " + std::to_string(rows));
  }
}

std::vector<InputId> top_k(const std::vector<double>& scores, std::size_t budget) {
  std::vector<InputId> ids(scores.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(budget), ids.end(),
                    [&](InputId a, InputId b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  ids.resize(budget);
  return ids;
}

SelectionResult make_result(std::vector<InputId> subset, BaselineMethod method, std::uint64_t seed) {
  SelectionResult result;
  result.budget = subset.size();
  result.subset = std::move(subset);
  result.method = std::string(to_string(method));
  result.seed = seed;
  return result;
}

}  // namespace

std::string_view to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::random: return "random";
    case BaselineMethod::gini: return "gini";
    case BaselineMethod::maxp: return "maxp";
  }
  return "random";
}

SelectionResult random_select(std::size_t rows, std::size_t budget, std::uint64_t seed) {
  check_budget(rows, budget);
  Rng rng(seed);
  return make_result(rng.sample_without_replacement(rows, budget), BaselineMethod::random, seed);
}

SelectionResult gini_top_k(const ProbabilityMatrix& probabilities, std::size_t budget) {
  check_budget(probabilities.rows(), budget);
  std::vector<double> scores(probabilities.rows());
  for (InputId i = 0; i < scores.size(); ++i) scores[i] = gini_score(probabilities.row(i));
  return make_result(top_k(scores, budget), BaselineMethod::gini, 0);
}

SelectionResult maxp_top_k(const ProbabilityMatrix& probabilities, std::size_t budget) {
  check_budget(probabilities.rows(), budget);
  std::vector<double> scores(probabilities.rows());
  for (InputId i = 0; i < scores.size(); ++i) {
    const auto row = probabilities.row(i);
    scores[i] = 1.0 - *std::max_element(row.begin(), row.end());
  }
  return make_result(top_k(scores, budget), BaselineMethod::maxp, 0);
}

}  // namespace deepselect
