#pragma once

// NSGA-II search over fixed-size input subsets with uncertainty-aware
// crossover and diversity-aware mutation.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deepselect/fitness.hpp"
#include "deepselect/rng.hpp"

namespace deepselect {

enum class Variant { full, simple_crossover, simple_mutation, gini_only_mutation, gd_only_mutation };

std::string_view to_string(Variant variant);
// Throws ConfigError for unknown names.
Variant parse_variant(std::string_view name);

struct SearchParams {
  std::size_t population_size = 700;
  std::size_t generations = 300;
  double crossover_rate = 0.75;
  double mutation_rate = 0.70;
  std::size_t tournament_size = 2;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  Variant variant = Variant::full;
  // 0 = default_worker_count().
  std::size_t workers = 0;

  static SearchParams paper_profile(std::size_t budget, std::uint64_t seed);
  static SearchParams desk_profile(std::size_t budget, std::uint64_t seed);

  // Throws ConfigError on invalid rates/sizes, BudgetError when budget > n.
  void validate(std::size_t dataset_size) const;
};

struct Individual {
  std::vector<InputId> genes;
  FitnessPair fitness;

  // Gene set in ascending order; identity used for deduplication and
  // lexicographic tie-breaks.
  std::vector<InputId> sorted_genes() const;
};

// Maximisation on both objectives: a >= b everywhere and > somewhere.
bool dominates(const FitnessPair& a, const FitnessPair& b);

// Unbounded set of mutually non-dominated individuals, unique by gene set.
class ParetoArchive {
 public:
  // Offers every candidate; dominated members are evicted.
  void update(std::span<const Individual> candidates);
  const std::vector<Individual>& members() const noexcept { return members_; }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t size() const noexcept { return members_.size(); }

 private:
  void offer(const Individual& candidate);
  std::vector<Individual> members_;
};

std::vector<Individual> init_population(const FitnessModel& model, const SearchParams& params, Rng& rng);

// Offspring of two parents at a given cut point in [1, budget-1]. Exposed so
// the slicing rule can be tested directly.
std::pair<Individual, Individual> crossover_at(const Individual& first, const Individual& second, std::size_t cut,
                                               const FitnessModel& model, Variant variant, Rng& rng);
std::pair<Individual, Individual> crossover(const Individual& first, const Individual& second,
                                            const FitnessModel& model, Variant variant, Rng& rng);

// Number of low-Gini candidates inspected and genes replaced by mutate.
std::size_t mutation_candidate_count(std::size_t budget);
std::size_t mutation_replacement_count(std::size_t budget);

Individual mutate(const Individual& individual, const FitnessModel& model, Variant variant, Rng& rng);

// Fronts of indices into `fitness`, best first. Within a front indices are
// ascending.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const FitnessPair> fitness);

// Crowding distance of each member of `front` (indices into `fitness`),
// returned in the same order as `front`.
std::vector<double> crowding_distance(std::span<const FitnessPair> fitness, std::span<const std::size_t> front);

// Rank and crowding distance for each member of a population.
struct SurvivalInfo {
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
};

SurvivalInfo rank_population(std::span<const Individual> population);

// Index of the tournament winner: lower rank, then larger crowding distance,
// then lexicographically smaller sorted gene set.
std::size_t tournament_select(std::span<const Individual> population, const SurvivalInfo& info,
                              std::size_t tournament_size, Rng& rng);

// Elitist (mu + lambda) truncation of `pool` to `size` individuals.
std::vector<Individual> survive(std::vector<Individual> pool, std::size_t size);

struct GenerationStats {
  std::size_t generation = 0;
  double best_gini = 0.0;
  double best_log_gd = kSingularLogGd;
  std::size_t archive_size = 0;
  std::size_t first_front_size = 0;
};

struct EvolutionObserver {
  std::function<void(const GenerationStats&)> on_generation;
  // Called with the surviving population after every generation.
  std::function<void(std::size_t generation, std::span<const Individual>)> on_population;
};

ParetoArchive evolve(const FitnessModel& model, const SearchParams& params, const EvolutionObserver& observer = {});

// Member closest to the ideal point after min-max normalising both
// objectives over the front. Throws EmptyFrontError.
const Individual& knee_point(std::span<const Individual> front);

}  // namespace deepselect
