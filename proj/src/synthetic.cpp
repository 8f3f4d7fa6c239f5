#include "deepselect/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "deepselect/error.hpp"
#include "deepselect/matrix_io.hpp"
#include "deepselect/rng.hpp"

namespace deepselect {
namespace {

constexpr double kClassSpread = 1.0;
constexpr double kInputSpread = 0.55;
constexpr double kFaultOffset = 1.2;
constexpr double kFaultSpread = 0.3;
constexpr double kMaxNoiseShare = 0.95;

struct LatentDraws {
  std::vector<double> base;           // per-input standard normal
  std::vector<double> fault_level;    // per-fault uniform [0, 1)
  std::vector<std::vector<double>> noise;  // per-input distribution over classes
};

double clamp_share(double t) { return std::clamp(t, 0.0, kMaxNoiseShare); }

// Share of probability mass moved away from the predicted class. Correct
// inputs centre on a low share; mispredicted inputs sit `separation` higher,
// scaled per fault so some faults are much less certain than others.
double noise_share(bool mispredicted, double base, double fault_level, double separation) {
  if (!mispredicted) return clamp_share(0.22 + 0.16 * base);
  return clamp_share(0.22 + separation * (0.35 + 0.65 * fault_level) + 0.08 * base);
}

void fill_row(std::span<double> row, ClassId predicted, double share, std::span<const double> noise) {
  for (std::size_t c = 0; c < row.size(); ++c) row[c] = share * noise[c];
  row[predicted] += 1.0 - share;
}

double gini_of(std::span<const double> row) {
  double squares = 0.0;
  for (const double p : row) squares += p * p;
  return 1.0 - squares;
}

}  // namespace

void SyntheticParams::validate() const {
  if (rows < 2) throw ConfigError("synthetic subject needs at least two inputs");
  if (classes < 2) throw ConfigError("synthetic subject needs at least two classes");
  if (dims < 1) throw ConfigError("synthetic subject needs at least one feature");
  if (faults < 1) throw ConfigError("faults must be at least 1");
  if (!(mispredict_rate > 0.0 && mispredict_rate < 1.0)) throw ConfigError("mispredict rate must lie in (0, 1)");
  if (!(correlation >= 0.0 && correlation < 1.0)) throw ConfigError("correlation target must lie in [0, 1)");
  const auto mispredicted = static_cast<std::size_t>(std::llround(static_cast<double>(rows) * mispredict_rate));
  if (mispredicted < faults) {
    throw ConfigError("round(n * mispredict-rate) = " + std::to_string(mispredicted) +
                      " mispredictions cannot populate " + std::to_string(faults) + " faults");
  }
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

SyntheticDataset generate_synthetic(const SyntheticParams& params) {
  params.validate();
  const std::size_t n = params.rows;
  const std::size_t m = params.classes;
  const std::size_t d = params.dims;
  Rng rng(params.seed);

  SyntheticDataset out;
  out.mispredicted = static_cast<std::size_t>(std::llround(static_cast<double>(n) * params.mispredict_rate));

  Matrix class_centres(m, d);
  for (double& v : class_centres.values()) v = kClassSpread * rng.normal();

  struct Fault {
    ClassId actual;
    ClassId predicted;
    std::vector<double> centre;
  };
  std::vector<Fault> faults(params.faults);
  for (auto& fault : faults) {
    fault.actual = rng.uniform_index(m);
    fault.predicted = (fault.actual + 1 + rng.uniform_index(m - 1)) % m;
    fault.centre.resize(d);
    const auto a = class_centres.row(fault.actual);
    const auto b = class_centres.row(fault.predicted);
    for (std::size_t j = 0; j < d; ++j) fault.centre[j] = 0.5 * (a[j] + b[j]) + kFaultOffset * rng.normal();
  }

  // Which inputs are mispredicted, and by which fault. Every fault gets at
  // least one member.
  const auto mispredicted_ids = rng.sample_without_replacement(n, out.mispredicted);
  std::vector<std::int64_t> fault_of(n, kNoiseCluster);
  // Fault sizes are skewed: fault f draws members with weight 1 / (f + 1),
  // so a few faults dominate and the rest are small.
  std::vector<double> cumulative(params.faults);
  double weight_total = 0.0;
  for (std::size_t f = 0; f < params.faults; ++f) {
    weight_total += 1.0 / static_cast<double>(f + 1);
    cumulative[f] = weight_total;
  }
  for (std::size_t k = 0; k < mispredicted_ids.size(); ++k) {
    std::size_t fault = k;
    if (k >= params.faults) {
      const double u = rng.uniform01() * weight_total;
      fault = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      fault = std::min(fault, params.faults - 1);
    }
    fault_of[mispredicted_ids[k]] = static_cast<std::int64_t>(fault);
  }

  out.labels.resize(n);
  std::vector<ClassId> predicted(n);
  out.features = Matrix(n, d);
  for (InputId i = 0; i < n; ++i) {
    auto row = out.features.row(i);
    if (fault_of[i] == kNoiseCluster) {
      out.labels[i] = rng.uniform_index(m);
      predicted[i] = out.labels[i];
      const auto centre = class_centres.row(out.labels[i]);
      for (std::size_t j = 0; j < d; ++j) row[j] = centre[j] + kInputSpread * rng.normal();
    } else {
      const Fault& fault = faults[static_cast<std::size_t>(fault_of[i])];
      out.labels[i] = fault.actual;
      predicted[i] = fault.predicted;
      for (std::size_t j = 0; j < d; ++j) row[j] = fault.centre[j] + kFaultSpread * rng.normal();
    }
  }

  LatentDraws latent;
  latent.base.resize(n);
  for (double& v : latent.base) v = rng.normal();
  latent.fault_level.resize(params.faults);
  for (double& v : latent.fault_level) v = rng.uniform01();
  latent.noise.assign(n, std::vector<double>(m));
  for (InputId i = 0; i < n; ++i) {
    auto& noise = latent.noise[i];
    double total = 0.0;
    for (double& v : noise) {
      v = -std::log(1.0 - rng.uniform01());
      total += v;
    }
    for (double& v : noise) v /= total;
    // Keep the predicted class on top so argmax never changes.
    const auto top = std::max_element(noise.begin(), noise.end());
    std::iter_swap(top, noise.begin() + static_cast<std::ptrdiff_t>(predicted[i]));
  }

  std::vector<double> indicator(n);
  for (InputId i = 0; i < n; ++i) indicator[i] = fault_of[i] == kNoiseCluster ? 0.0 : 1.0;

  out.probabilities = Matrix(n, m);
  auto build = [&](double separation) {
    std::vector<double> gini(n);
    for (InputId i = 0; i < n; ++i) {
      const bool wrong = fault_of[i] != kNoiseCluster;
      const double level = wrong ? latent.fault_level[static_cast<std::size_t>(fault_of[i])] : 0.0;
      auto row = out.probabilities.row(i);
      fill_row(row, predicted[i], noise_share(wrong, latent.base[i], level, separation), latent.noise[i]);
      gini[i] = gini_of(row);
    }
    return pearson_correlation(gini, indicator);
  };

  // The correlation grows with the separation; bisect on it.
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (build(mid) < params.correlation) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.achieved_correlation = build(0.5 * (lo + hi));

  for (InputId i = 0; i < n; ++i) {
    if (fault_of[i] != kNoiseCluster) out.clusters.emplace_back(i, fault_of[i]);
  }
  return out;
}

RunManifest write_synthetic(const SyntheticDataset& dataset, const SyntheticParams& params,
                            const std::filesystem::path& directory, std::size_t budget) {
  std::filesystem::create_directories(directory);
  RunManifest manifest;
  manifest.probabilities = directory / "probabilities.dsm1";
  manifest.features = directory / "features.dsm1";
  manifest.labels = directory / "labels.csv";
  manifest.clusters = directory / "clusters.csv";
  manifest.budget = budget;
  manifest.seed = params.seed;
  manifest.method = "deepgd";
  manifest.rows = params.rows;
  manifest.classes = params.classes;
  manifest.feature_dims = params.dims;
  manifest.search = {{"profile", "desk"}};

  io::write_matrix(manifest.probabilities, dataset.probabilities, io::MatrixFormat::dsm1);
  io::write_matrix(manifest.features, dataset.features, io::MatrixFormat::dsm1);
  std::vector<std::pair<std::size_t, std::int64_t>> labels;
  labels.reserve(dataset.labels.size());
  for (InputId i = 0; i < dataset.labels.size(); ++i) labels.emplace_back(i, static_cast<std::int64_t>(dataset.labels[i]));
  io::write_id_values(manifest.labels, labels);
  io::write_id_values(manifest.clusters, dataset.clusters);
  manifest.save(directory / "manifest.json");
  return manifest;
}

}  // namespace deepselect
