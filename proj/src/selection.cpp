#include "deepselect/selection.hpp"

#include <algorithm>
#include <cmath>

#include "deepselect/error.hpp"

namespace deepselect {

void SelectionResult::validate(std::size_t rows) const {
  if (subset.size() != budget) {
    throw ShapeError("selection holds " + std::to_string(subset.size()) + " ids, budget is " + std::to_string(budget));
  }
  std::vector<InputId> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.back() >= rows) {
    throw IndexError("selected id " + std::to_string(sorted.back()) + " is outside [0, " + std::to_string(rows) + ")");
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ValueError("selection repeats an id");
}

nlohmann::ordered_json to_json(const SelectionResult& result) {
  nlohmann::ordered_json out;
  out["method"] = result.method;
  out["budget"] = result.budget;
  out["seed"] = result.seed;
  if (result.fitness) {
    out["fitness"]["gini"] = result.fitness->gini;
    // JSON has no infinity; a singular Gram is reported as null.
    if (std::isfinite(result.fitness->log_gd)) {
      out["fitness"]["log_gd"] = result.fitness->log_gd;
    } else {
      out["fitness"]["log_gd"] = nullptr;
    }
  }
  out["parameters"] = result.parameters;
  out["subset"] = result.subset;
  return out;
}

}  // namespace deepselect
