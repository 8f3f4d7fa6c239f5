#include "deepselect/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "deepselect/error.hpp"

namespace deepselect {
namespace {

// P(W+ <= w) and P(W+ >= w) under the null where each rank carries a
// random sign. Ranks are doubled so midranks become integers.
std::pair<double, double> exact_tails(const std::vector<double>& ranks, double statistic) {
  std::vector<std::uint64_t> doubled;
  doubled.reserve(ranks.size());
  for (const double r : ranks) doubled.push_back(static_cast<std::uint64_t>(std::llround(2.0 * r)));
  const std::uint64_t total = std::accumulate(doubled.begin(), doubled.end(), std::uint64_t{0});
  std::vector<double> counts(total + 1, 0.0);
  counts[0] = 1.0;
  std::uint64_t reach = 0;
  for (const std::uint64_t r : doubled) {
    for (std::uint64_t s = reach + 1; s-- > 0;) counts[s + r] += counts[s];
    reach += r;
  }
  const auto target = static_cast<std::uint64_t>(std::llround(2.0 * statistic));
  const double outcomes = std::ldexp(1.0, static_cast<int>(ranks.size()));
  double lower = 0.0;
  double upper = 0.0;
  for (std::uint64_t s = 0; s <= total; ++s) {
    if (s <= target) lower += counts[s];
    if (s >= target) upper += counts[s];
  }
  return {lower / outcomes, upper / outcomes};
}

double normal_upper(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

StabilityStats stability_stats(std::span<const double> values) {
  if (values.size() < 2) throw ValueError("stability statistics need at least two runs");
  StabilityStats stats;
  stats.runs = values.size();
  stats.min = *std::min_element(values.begin(), values.end());
  stats.max = *std::max_element(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  stats.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double squares = 0.0;
  for (const double v : values) squares += (v - stats.mean) * (v - stats.mean);
  stats.std = std::sqrt(squares / (n - 1.0));
  // Rounding of the mean can push it a hair outside [min, max].
  stats.mean = std::clamp(stats.mean, stats.min, stats.max);
  return stats;
}

nlohmann::ordered_json to_json(const StabilityStats& stats) {
  return {{"runs", stats.runs}, {"mean", stats.mean}, {"min", stats.min}, {"max", stats.max}, {"std", stats.std}};
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, Alternative alternative) {
  std::vector<double> diffs;
  for (const auto& [a, b] : pairs) {
    const double d = a - b;
    if (!std::isfinite(d)) throw ValueError("Wilcoxon test needs finite observations");
    if (d != 0.0) diffs.push_back(d);
  }
  const std::size_t n = diffs.size();
  if (n < kWilcoxonMinPairs) {
    throw SampleSizeError("Wilcoxon test needs at least " + std::to_string(kWilcoxonMinPairs) +
                          " non-zero differences, got " + std::to_string(n));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(diffs[a]) < std::abs(diffs[b]);
  });
  std::vector<double> ranks(n);
  double tie_correction = 0.0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end + 1 < n && std::abs(diffs[order[end + 1]]) == std::abs(diffs[order[start]])) ++end;
    const double midrank = 0.5 * static_cast<double>(start + end) + 1.0;
    for (std::size_t k = start; k <= end; ++k) ranks[order[k]] = midrank;
    const double t = static_cast<double>(end - start + 1);
    tie_correction += t * t * t - t;
    start = end + 1;
  }

  WilcoxonResult result;
  result.nonzero = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (diffs[i] > 0.0) result.statistic += ranks[i];
  }

  double p_lower = 0.0;
  double p_upper = 0.0;
  if (n <= kWilcoxonExactLimit) {
    result.exact = true;
    std::tie(p_lower, p_upper) = exact_tails(ranks, result.statistic);
  } else {
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_correction / 48.0;
    const double sd = std::sqrt(variance);
    p_upper = normal_upper((result.statistic - mean - 0.5) / sd);
    p_lower = normal_upper((mean - result.statistic - 0.5) / sd);
  }
  switch (alternative) {
    case Alternative::greater: result.p_value = p_upper; break;
    case Alternative::less: result.p_value = p_lower; break;
    case Alternative::two_sided: result.p_value = std::min(1.0, 2.0 * std::min(p_lower, p_upper)); break;
  }
  return result;
}

}  // namespace deepselect
