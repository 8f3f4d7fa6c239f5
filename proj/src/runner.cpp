#include "deepselect/runner.hpp"

#include "deepselect/baselines.hpp"
#include "deepselect/error.hpp"

namespace deepselect {
namespace {

template <typename T>
void override_number(const nlohmann::json& overrides, const char* key, T& field) {
  if (!overrides.contains(key)) return;
  const auto& value = overrides[key];
  if (!value.is_number()) throw ConfigError(std::string("search field \"") + key + "\" must be numeric");
  if constexpr (std::is_integral_v<T>) {
    if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
      throw ConfigError(std::string("search field \"") + key + "\" must be a non-negative integer");
    }
  }
  field = value.get<T>();
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::deepgd: return "deepgd";
    case Method::random: return "random";
    case Method::gini: return "gini";
    case Method::maxp: return "maxp";
  }
  return "deepgd";
}

Method parse_method(std::string_view name) {
  for (const Method m : {Method::deepgd, Method::random, Method::gini, Method::maxp}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "' (expected deepgd, random, gini or maxp)");
}

Profile parse_profile(std::string_view name) {
  if (name == "paper") return Profile::paper;
  if (name == "desk") return Profile::desk;
  throw ConfigError("unknown profile '" + std::string(name) + "' (expected paper or desk)");
}

SearchParams make_search_params(Profile profile, std::size_t budget, std::uint64_t seed,
                                const nlohmann::json& overrides) {
  if (overrides.contains("profile")) {
    if (!overrides["profile"].is_string()) throw ConfigError("search field \"profile\" must be a string");
    profile = parse_profile(overrides["profile"].get<std::string>());
  }
  SearchParams params =
      profile == Profile::paper ? SearchParams::paper_profile(budget, seed) : SearchParams::desk_profile(budget, seed);
  override_number(overrides, "population_size", params.population_size);
  override_number(overrides, "generations", params.generations);
  override_number(overrides, "crossover_rate", params.crossover_rate);
  override_number(overrides, "mutation_rate", params.mutation_rate);
  override_number(overrides, "tournament_size", params.tournament_size);
  if (overrides.contains("variant")) {
    if (!overrides["variant"].is_string()) throw ConfigError("search field \"variant\" must be a string");
    params.variant = parse_variant(overrides["variant"].get<std::string>());
  }
  return params;
}

nlohmann::ordered_json to_json(const SearchParams& params) {
  nlohmann::ordered_json out;
  out["population_size"] = params.population_size;
  out["generations"] = params.generations;
  out["crossover_rate"] = params.crossover_rate;
  out["mutation_rate"] = params.mutation_rate;
  out["tournament_size"] = params.tournament_size;
  out["variant"] = std::string(to_string(params.variant));
  return out;
}

SelectionResult run_deepgd(const RunData& data, const SearchParams& params, const EvolutionObserver& observer) {
  const FitnessModel model(data.probabilities(), data.normalized());
  const ParetoArchive archive = evolve(model, params, observer);
  const Individual& knee = knee_point(archive.members());

  SelectionResult result;
  result.subset = knee.genes;
  result.method = "deepgd";
  result.fitness = knee.fitness;
  result.seed = params.seed;
  result.budget = params.budget;
  result.parameters = to_json(params);
  result.parameters["archive_size"] = archive.size();
  return result;
}

SelectionResult run_deepgd(const RunManifest& manifest) {
  const RunData data(manifest);
  return run_deepgd(data, make_search_params(Profile::paper, manifest.budget, manifest.seed, manifest.search));
}

SelectionResult run_method(Method method, const RunData& data, const SearchParams& params,
                           const EvolutionObserver& observer) {
  switch (method) {
    case Method::deepgd:
      return run_deepgd(data, params, observer);
    case Method::random:
    case Method::gini:
    case Method::maxp: {
      SelectionResult result = method == Method::random ? random_select(data.rows(), params.budget, params.seed)
                               : method == Method::gini ? gini_top_k(data.probabilities(), params.budget)
                                                        : maxp_top_k(data.probabilities(), params.budget);
      result.seed = params.seed;
      result.fitness = evaluate_fitness(data.probabilities(), data.normalized(), result.subset);
      return result;
    }
  }
  throw ConfigError("unknown method");
}

}  // namespace deepselect
