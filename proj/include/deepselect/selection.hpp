#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepselect/data_model.hpp"
#include "deepselect/fitness.hpp"

namespace deepselect {

struct SelectionResult {
  std::vector<InputId> subset;
  std::string method;
  std::optional<FitnessPair> fitness;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  // Method parameters echoed into the JSON sidecar.
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();

  // Throws ValueError on repeated ids, IndexError on ids >= rows, ShapeError
  // when the subset size differs from the budget.
  void validate(std::size_t rows) const;
};

nlohmann::ordered_json to_json(const SelectionResult& result);

}  // namespace deepselect
