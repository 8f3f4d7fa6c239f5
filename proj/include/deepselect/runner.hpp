#pragma once

// Glue between manifests and the selectors.

#include <string_view>

#include "deepselect/manifest.hpp"
#include "deepselect/search.hpp"
#include "deepselect/selection.hpp"

namespace deepselect {

enum class Method { deepgd, random, gini, maxp };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);  // ConfigError on unknown names

enum class Profile { paper, desk };

Profile parse_profile(std::string_view name);

// Profile defaults, then any keys present in `overrides`
// (population_size, generations, crossover_rate, mutation_rate,
// tournament_size, variant, profile).
SearchParams make_search_params(Profile profile, std::size_t budget, std::uint64_t seed,
                                const nlohmann::json& overrides = nlohmann::json::object());

nlohmann::ordered_json to_json(const SearchParams& params);

SelectionResult run_deepgd(const RunData& data, const SearchParams& params, const EvolutionObserver& observer = {});

// Loads the manifest's files and runs the search with the manifest's budget,
// seed and search block (paper profile unless the block says otherwise).
SelectionResult run_deepgd(const RunManifest& manifest);

// Runs any selector; fitness of the chosen subset is filled in for all of
// them. Baselines ignore everything in `params` except budget and seed.
SelectionResult run_method(Method method, const RunData& data, const SearchParams& params,
                           const EvolutionObserver& observer = {});

}  // namespace deepselect
