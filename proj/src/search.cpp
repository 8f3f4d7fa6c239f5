#include "deepselect/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "deepselect/error.hpp"
#include "deepselect/parallel.hpp"

namespace deepselect {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Positions of `genes` ordered by ascending Gini, ties by ascending id.
std::vector<std::size_t> positions_by_gini_ascending(std::span<const InputId> genes, const FitnessModel& model) {
  std::vector<std::size_t> order(genes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ga = model.gini(genes[a]);
    const double gb = model.gini(genes[b]);
    if (ga != gb) return ga < gb;
    return genes[a] < genes[b];
  });
  return order;
}

std::vector<InputId> sorted_by_gini_descending(std::span<const InputId> genes, const FitnessModel& model) {
  std::vector<InputId> sorted(genes.begin(), genes.end());
  std::sort(sorted.begin(), sorted.end(), [&](InputId a, InputId b) {
    const double ga = model.gini(a);
    const double gb = model.gini(b);
    if (ga != gb) return ga > gb;
    return a < b;
  });
  return sorted;
}

InputId draw_absent(std::size_t n, const std::unordered_set<InputId>& present, Rng& rng) {
  while (true) {
    const InputId candidate = rng.uniform_index(n);
    if (!present.contains(candidate)) return candidate;
  }
}

// Replaces repeated ids (second and later occurrences, left to right) with
// uniformly drawn ids absent from the offspring.
void repair_duplicates(std::vector<InputId>& genes, std::size_t n, Rng& rng) {
  std::unordered_set<InputId> present(genes.begin(), genes.end());
  if (present.size() == genes.size()) return;
  std::unordered_set<InputId> seen;
  seen.reserve(genes.size());
  for (InputId& gene : genes) {
    if (seen.insert(gene).second) continue;
    gene = draw_absent(n, present, rng);
    present.insert(gene);
    seen.insert(gene);
  }
}

void replace_positions(std::vector<InputId>& genes, std::span<const std::size_t> positions, std::size_t n, Rng& rng) {
  std::unordered_set<InputId> present(genes.begin(), genes.end());
  for (const std::size_t pos : positions) {
    const InputId fresh = draw_absent(n, present, rng);
    present.insert(fresh);
    genes[pos] = fresh;
  }
}

std::vector<std::size_t> lowest_contribution_positions(std::span<const InputId> genes,
                                                       std::span<const std::size_t> candidates,
                                                       std::span<const double> contributions, std::size_t count) {
  std::vector<std::size_t> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (contributions[a] != contributions[b]) return contributions[a] < contributions[b];
    return genes[a] < genes[b];
  });
  order.resize(std::min(count, order.size()));
  return order;
}

std::pair<std::vector<InputId>, std::vector<InputId>> cross_genes(std::span<const InputId> first,
                                                                  std::span<const InputId> second,
                                                                  std::size_t cut, const FitnessModel& model,
                                                                  Variant variant, Rng& rng) {
  const std::size_t budget = first.size();
  if (second.size() != budget) throw ConfigError("crossover parents differ in size");
  if (cut < 1 || cut >= budget) throw ConfigError("crossover cut point must lie in [1, budget-1]");
  std::vector<InputId> a(first.begin(), first.end());
  std::vector<InputId> b(second.begin(), second.end());
  if (variant != Variant::simple_crossover) {
    a = sorted_by_gini_descending(a, model);
    b = sorted_by_gini_descending(b, model);
  }
  const std::size_t tail = budget - cut;
  std::vector<InputId> child1(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(cut));
  child1.insert(child1.end(), b.begin(), b.begin() + static_cast<std::ptrdiff_t>(tail));
  std::vector<InputId> child2(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end());
  child2.insert(child2.end(), b.begin() + static_cast<std::ptrdiff_t>(tail), b.end());
  repair_duplicates(child1, model.size(), rng);
  repair_duplicates(child2, model.size(), rng);
  return {std::move(child1), std::move(child2)};
}

std::pair<std::vector<InputId>, std::vector<InputId>> cross_genes(std::span<const InputId> first,
                                                                  std::span<const InputId> second,
                                                                  const FitnessModel& model, Variant variant,
                                                                  Rng& rng) {
  const std::size_t cut = rng.uniform_between(1, first.size() - 1);
  return cross_genes(first, second, cut, model, variant, rng);
}

void mutate_genes(std::vector<InputId>& genes, const FitnessModel& model, Variant variant, Rng& rng) {
  const std::size_t budget = genes.size();
  if (budget >= model.size()) return;  // every input is already selected
  const std::size_t replace = mutation_replacement_count(budget);
  std::vector<std::size_t> chosen;
  switch (variant) {
    case Variant::simple_mutation:
      chosen = rng.sample_without_replacement(budget, replace);
      break;
    case Variant::gini_only_mutation: {
      chosen = positions_by_gini_ascending(genes, model);
      chosen.resize(replace);
      break;
    }
    case Variant::gd_only_mutation: {
      std::vector<std::size_t> all(budget);
      std::iota(all.begin(), all.end(), 0);
      const auto contributions = model.gd_contributions(genes);
      chosen = lowest_contribution_positions(genes, all, contributions, replace);
      break;
    }
    case Variant::full:
    case Variant::simple_crossover: {
      auto candidates = positions_by_gini_ascending(genes, model);
      candidates.resize(mutation_candidate_count(budget));
      const auto contributions = model.gd_contributions(genes);
      chosen = lowest_contribution_positions(genes, candidates, contributions, replace);
      break;
    }
  }
  replace_positions(genes, chosen, model.size(), rng);
}

}  // namespace

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::full: return "full";
    case Variant::simple_crossover: return "simple_crossover";
    case Variant::simple_mutation: return "simple_mutation";
    case Variant::gini_only_mutation: return "gini_only_mutation";
    case Variant::gd_only_mutation: return "gd_only_mutation";
  }
  return "full";
}

Variant parse_variant(std::string_view name) {
  for (const Variant v : {Variant::full, Variant::simple_crossover, Variant::simple_mutation,
                          Variant::gini_only_mutation, Variant::gd_only_mutation}) {
    if (to_string(v) == name) return v;
  }
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

SearchParams SearchParams::paper_profile(std::size_t budget, std::uint64_t seed) {
  SearchParams params;
  params.budget = budget;
  params.seed = seed;
  return params;
}

SearchParams SearchParams::desk_profile(std::size_t budget, std::uint64_t seed) {
  SearchParams params = paper_profile(budget, seed);
  params.population_size = 100;
  params.generations = 50;
  return params;
}

void SearchParams::validate(std::size_t dataset_size) const {
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw ConfigError("crossover rate must lie in [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ConfigError("mutation rate must lie in [0, 1]");
  if (population_size < 2) throw ConfigError("population size must be at least 2");
  if (tournament_size < 1) throw ConfigError("tournament size must be at least 1");
  if (budget < 2) throw BudgetError("budget must be at least 2");
  if (budget > dataset_size) {
    throw BudgetError("budget " + std::to_string(budget) + " exceeds dataset size " + std::to_string(dataset_size));
  }
}

std::vector<InputId> Individual::sorted_genes() const {
  std::vector<InputId> sorted = genes;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

bool dominates(const FitnessPair& a, const FitnessPair& b) {
  return a.gini >= b.gini && a.log_gd >= b.log_gd && (a.gini > b.gini || a.log_gd > b.log_gd);
}

void ParetoArchive::offer(const Individual& candidate) {
  const auto key = candidate.sorted_genes();
  for (const auto& member : members_) {
    if (dominates(member.fitness, candidate.fitness)) return;
    if (member.fitness == candidate.fitness && member.sorted_genes() == key) return;
  }
  std::erase_if(members_, [&](const Individual& member) { return dominates(candidate.fitness, member.fitness); });
  members_.push_back(candidate);
}

void ParetoArchive::update(std::span<const Individual> candidates) {
  for (const auto& candidate : candidates) offer(candidate);
}

std::vector<Individual> init_population(const FitnessModel& model, const SearchParams& params, Rng& rng) {
  params.validate(model.size());
  std::vector<Individual> population(params.population_size);
  for (auto& individual : population) individual.genes = rng.sample_without_replacement(model.size(), params.budget);
  const std::size_t workers = params.workers ? params.workers : default_worker_count();
  parallel_for(population.size(), workers,
               [&](std::size_t i) { population[i].fitness = model.evaluate(population[i].genes); });
  return population;
}

std::pair<Individual, Individual> crossover_at(const Individual& first, const Individual& second, std::size_t cut,
                                               const FitnessModel& model, Variant variant, Rng& rng) {
  auto [a, b] = cross_genes(first.genes, second.genes, cut, model, variant, rng);
  Individual child1{std::move(a), {}};
  Individual child2{std::move(b), {}};
  child1.fitness = model.evaluate(child1.genes);
  child2.fitness = model.evaluate(child2.genes);
  return {std::move(child1), std::move(child2)};
}

std::pair<Individual, Individual> crossover(const Individual& first, const Individual& second,
                                            const FitnessModel& model, Variant variant, Rng& rng) {
  if (first.genes.size() < 2) throw ConfigError("crossover needs individuals of at least two genes");
  const std::size_t cut = rng.uniform_between(1, first.genes.size() - 1);
  return crossover_at(first, second, cut, model, variant, rng);
}

std::size_t mutation_candidate_count(std::size_t budget) {
  const auto rounded = static_cast<std::size_t>(std::llround(0.02 * static_cast<double>(budget)));
  return std::min(budget, std::max<std::size_t>(1, rounded));
}

std::size_t mutation_replacement_count(std::size_t budget) {
  return std::max<std::size_t>(1, mutation_candidate_count(budget) / 2);
}

Individual mutate(const Individual& individual, const FitnessModel& model, Variant variant, Rng& rng) {
  Individual mutated{individual.genes, {}};
  mutate_genes(mutated.genes, model, variant, rng);
  mutated.fitness = model.evaluate(mutated.genes);
  return mutated;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const FitnessPair> fitness) {
  const std::size_t n = fitness.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(fitness[p], fitness[q])) {
        dominated_by[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(fitness[q], fitness[p])) {
        dominated_by[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (const std::size_t p : current) {
      for (const std::size_t q : dominated_by[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const FitnessPair> fitness, std::span<const std::size_t> front) {
  const std::size_t size = front.size();
  std::vector<double> distance(size, 0.0);
  if (size <= 2) {
    std::fill(distance.begin(), distance.end(), kInf);
    return distance;
  }
  for (const int objective : {0, 1}) {
    std::vector<double> values(size);
    for (std::size_t i = 0; i < size; ++i) {
      const FitnessPair& f = fitness[front[i]];
      values[i] = objective == 0 ? f.gini : f.log_gd;
    }
    // Singular GD sits at the objective minimum.
    double finite_min = kInf;
    for (const double v : values) {
      if (std::isfinite(v)) finite_min = std::min(finite_min, v);
    }
    for (double& v : values) {
      if (!std::isfinite(v)) v = std::isfinite(finite_min) ? finite_min : 0.0;
    }
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    distance[order.front()] = kInf;
    distance[order.back()] = kInf;
    const double span = values[order.back()] - values[order.front()];
    if (span <= 0.0) continue;
    for (std::size_t k = 1; k + 1 < size; ++k) {
      distance[order[k]] += (values[order[k + 1]] - values[order[k - 1]]) / span;
    }
  }
  return distance;
}

SurvivalInfo rank_population(std::span<const Individual> population) {
  std::vector<FitnessPair> fitness;
  fitness.reserve(population.size());
  for (const auto& individual : population) fitness.push_back(individual.fitness);
  SurvivalInfo info{std::vector<std::size_t>(population.size()), std::vector<double>(population.size())};
  const auto fronts = non_dominated_sort(fitness);
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    const auto distances = crowding_distance(fitness, fronts[r]);
    for (std::size_t k = 0; k < fronts[r].size(); ++k) {
      info.rank[fronts[r][k]] = r;
      info.crowding[fronts[r][k]] = distances[k];
    }
  }
  return info;
}

std::size_t tournament_select(std::span<const Individual> population, const SurvivalInfo& info,
                              std::size_t tournament_size, Rng& rng) {
  if (population.empty()) throw ConfigError("tournament over an empty population");
  std::size_t best = rng.uniform_index(population.size());
  for (std::size_t round = 1; round < tournament_size; ++round) {
    const std::size_t challenger = rng.uniform_index(population.size());
    if (info.rank[challenger] != info.rank[best]) {
      if (info.rank[challenger] < info.rank[best]) best = challenger;
      continue;
    }
    if (info.crowding[challenger] != info.crowding[best]) {
      if (info.crowding[challenger] > info.crowding[best]) best = challenger;
      continue;
    }
    if (population[challenger].sorted_genes() < population[best].sorted_genes()) best = challenger;
  }
  return best;
}

std::vector<Individual> survive(std::vector<Individual> pool, std::size_t size) {
  std::vector<FitnessPair> fitness;
  fitness.reserve(pool.size());
  for (const auto& individual : pool) fitness.push_back(individual.fitness);
  std::vector<Individual> survivors;
  survivors.reserve(size);
  for (const auto& front : non_dominated_sort(fitness)) {
    if (survivors.size() == size) break;
    if (survivors.size() + front.size() <= size) {
      for (const std::size_t i : front) survivors.push_back(std::move(pool[i]));
      continue;
    }
    const auto distances = crowding_distance(fitness, front);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distances[a] > distances[b]; });
    for (std::size_t k = 0; survivors.size() < size; ++k) survivors.push_back(std::move(pool[front[order[k]]]));
  }
  return survivors;
}

ParetoArchive evolve(const FitnessModel& model, const SearchParams& params, const EvolutionObserver& observer) {
  params.validate(model.size());
  const std::size_t workers = params.workers ? params.workers : default_worker_count();
  Rng rng(params.seed);
  std::vector<Individual> population = init_population(model, params, rng);

  ParetoArchive archive;
  SurvivalInfo info = rank_population(population);
  auto archive_first_front = [&] {
    std::vector<Individual> front;
    for (std::size_t i = 0; i < population.size(); ++i) {
      if (info.rank[i] == 0) front.push_back(population[i]);
    }
    archive.update(front);
    return front.size();
  };
  auto report = [&](std::size_t generation, std::size_t front_size) {
    if (observer.on_population) observer.on_population(generation, population);
    if (!observer.on_generation) return;
    GenerationStats stats;
    stats.generation = generation;
    stats.archive_size = archive.size();
    stats.first_front_size = front_size;
    stats.best_gini = -kInf;
    for (const auto& individual : population) {
      stats.best_gini = std::max(stats.best_gini, individual.fitness.gini);
      stats.best_log_gd = std::max(stats.best_log_gd, individual.fitness.log_gd);
    }
    observer.on_generation(stats);
  };
  report(0, archive_first_front());

  for (std::size_t generation = 1; generation <= params.generations; ++generation) {
    std::vector<Individual> offspring;
    std::vector<bool> changed;
    offspring.reserve(params.population_size + 1);
    while (offspring.size() < params.population_size) {
      const Individual& first = population[tournament_select(population, info, params.tournament_size, rng)];
      const Individual& second = population[tournament_select(population, info, params.tournament_size, rng)];
      if (rng.bernoulli(params.crossover_rate)) {
        auto [a, b] = cross_genes(first.genes, second.genes, model, params.variant, rng);
        offspring.push_back({std::move(a), {}});
        offspring.push_back({std::move(b), {}});
        changed.push_back(true);
        changed.push_back(true);
      } else {
        offspring.push_back(first);
        offspring.push_back(second);
        changed.push_back(false);
        changed.push_back(false);
      }
      for (std::size_t k = offspring.size() - 2; k < offspring.size(); ++k) {
        if (rng.bernoulli(params.mutation_rate)) {
          mutate_genes(offspring[k].genes, model, params.variant, rng);
          changed[k] = true;
        }
      }
    }
    offspring.resize(params.population_size);
    parallel_for(offspring.size(), workers, [&](std::size_t i) {
      if (changed[i]) offspring[i].fitness = model.evaluate(offspring[i].genes);
    });

    std::vector<Individual> pool = std::move(population);
    pool.insert(pool.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));
    population = survive(std::move(pool), params.population_size);
    info = rank_population(population);
    report(generation, archive_first_front());
  }
  return archive;
}

const Individual& knee_point(std::span<const Individual> front) {
  if (front.empty()) throw EmptyFrontError("knee point of an empty front");
  auto bounds = [&](auto project) {
    double lo = kInf;
    double hi = -kInf;
    for (const auto& member : front) {
      const double v = project(member.fitness);
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return std::pair{lo, hi};
  };
  auto normalise = [](double v, std::pair<double, double> range) {
    const auto [lo, hi] = range;
    if (!std::isfinite(v) || !(hi > lo)) return 0.0;
    return (v - lo) / (hi - lo);
  };
  const auto gini_range = bounds([](const FitnessPair& f) { return f.gini; });
  const auto gd_range = bounds([](const FitnessPair& f) { return f.log_gd; });

  std::size_t best = 0;
  double best_distance = kInf;
  std::vector<InputId> best_key;
  for (std::size_t i = 0; i < front.size(); ++i) {
    const double gini_gap = 1.0 - normalise(front[i].fitness.gini, gini_range);
    const double gd_gap = 1.0 - normalise(front[i].fitness.log_gd, gd_range);
    const double distance = std::sqrt(gd_gap * gd_gap + gini_gap * gini_gap);
    if (distance < best_distance) {
      best = i;
      best_distance = distance;
      best_key.clear();
    } else if (distance == best_distance) {
      if (best_key.empty()) best_key = front[best].sorted_genes();
      auto key = front[i].sorted_genes();
      if (key < best_key) {
        best = i;
        best_key = std::move(key);
      }
    }
  }
  return front[best];
}

}  // namespace deepselect
