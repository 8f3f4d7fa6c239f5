#pragma once

// Black-box comparison selectors.

#include <cstdint>
#include <string_view>

#include "deepselect/data_model.hpp"
#include "deepselect/rng.hpp"
#include "deepselect/selection.hpp"

namespace deepselect {

enum class BaselineMethod { random, gini, maxp };

std::string_view to_string(BaselineMethod method);

// Uniform budget-subset without replacement. Throws BudgetError.
SelectionResult random_select(std::size_t rows, std::size_t budget, std::uint64_t seed);

// The `budget` inputs with the largest Gini score, ties by ascending id.
SelectionResult gini_top_k(const ProbabilityMatrix& probabilities, std::size_t budget);

// The `budget` inputs with the largest 1 - max_i p_i, ties by ascending id.
SelectionResult maxp_top_k(const ProbabilityMatrix& probabilities, std::size_t budget);

}  // namespace deepselect
