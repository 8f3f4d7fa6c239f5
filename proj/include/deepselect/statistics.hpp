#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include <json.hpp>

namespace deepselect {

struct StabilityStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1 denominator)
  std::size_t runs = 0;
};

// Throws ValueError for fewer than two values.
StabilityStats stability_stats(std::span<const double> values);

nlohmann::ordered_json to_json(const StabilityStats& stats);

enum class Alternative {
  two_sided,
  greater,  // first member of each pair tends to be larger
  less,
};

struct WilcoxonResult {
  double statistic = 0.0;      // W+, sum of ranks of positive differences
  std::size_t nonzero = 0;     // pairs left after dropping zero differences
  bool exact = false;
  double p_value = 1.0;
};

inline constexpr std::size_t kWilcoxonMinPairs = 5;
inline constexpr std::size_t kWilcoxonExactLimit = 20;

// Wilcoxon signed-rank test on differences first - second. Zero differences
// are dropped and tied magnitudes get midranks. The null distribution is
// enumerated exactly for up to kWilcoxonExactLimit non-zero pairs; beyond
// that a tie-corrected normal approximation with continuity correction is
// used. Throws SampleSizeError with fewer than kWilcoxonMinPairs non-zero
// differences.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    Alternative alternative = Alternative::two_sided);

}  // namespace deepselect
