#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "deepselect/error.hpp"
#include "deepselect/evaluation.hpp"
#include "deepselect/matrix_io.hpp"
#include "deepselect/parallel.hpp"
#include "deepselect/runner.hpp"
#include "deepselect/statistics.hpp"
#include "deepselect/synthetic.hpp"

namespace deepselect::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::filesystem::path sidecar_path(const fs::path& selection) {
  fs::path sidecar = selection;
  sidecar.replace_extension(".json");
  return sidecar;
}

// "deepgd", "random", ... or "deepgd:<variant>".
struct MethodSpec {
  std::string label;
  Method method;
  std::optional<Variant> variant;
};

MethodSpec parse_method_spec(const std::string& text) {
  MethodSpec spec;
  spec.label = text;
  const auto colon = text.find(':');
  spec.method = parse_method(text.substr(0, colon));
  if (colon != std::string::npos) {
    if (spec.method != Method::deepgd) throw ConfigError("only deepgd accepts a variant suffix: " + text);
    spec.variant = parse_variant(text.substr(colon + 1));
  }
  return spec;
}

SearchParams params_for(const RunManifest& manifest, const std::string& profile,
                        std::optional<std::size_t> budget, std::optional<std::uint64_t> seed) {
  const std::size_t b = budget.value_or(manifest.budget);
  if (b == 0) throw BudgetError("budget must be positive");
  const std::uint64_t s = seed.value_or(manifest.seed);
  nlohmann::json overrides = manifest.search;
  if (!profile.empty()) overrides["profile"] = profile;
  return make_search_params(Profile::paper, b, s, overrides);
}

std::string format_log_gd(double value) { return std::isfinite(value) ? io::format_double(value) : "-inf"; }

}  // namespace

int run_select(const SelectOptions& options) {
  const RunManifest manifest = RunManifest::load(options.manifest);
  const RunData data(manifest);
  SearchParams params = params_for(manifest, options.profile, options.budget, options.seed);
  if (!options.variant.empty()) params.variant = parse_variant(options.variant);
  const Method method = parse_method(options.method.empty() ? manifest.method : options.method);
  if (method == Method::deepgd) {
    params.validate(data.rows());
  } else if (params.budget > data.rows()) {
    throw BudgetError("budget " + std::to_string(params.budget) + " exceeds dataset size " +
                      std::to_string(data.rows()));
  }

  EvolutionObserver observer;
  if (options.verbose) {
    observer.on_generation = [](const GenerationStats& s) {
      std::cerr << "generation " << s.generation << " best_gini " << io::format_double(s.best_gini)
                << " best_log_gd " << format_log_gd(s.best_log_gd) << " front " << s.first_front_size
                << " archive " << s.archive_size << "\n";
    };
  }
  const SelectionResult result = run_method(method, data, params, observer);
  io::write_id_list(options.out, result.subset);
  io::write_file(sidecar_path(options.out), to_json(result).dump(2) + "\n");
  return 0;
}

int run_evaluate(const EvaluateOptions& options) {
  const RunManifest manifest = RunManifest::load(options.manifest);
  const RunData data(manifest);
  SelectionResult selection;
  selection.subset = io::read_id_list(options.selection);
  selection.budget = selection.subset.size();
  selection.method = "external";
  const fs::path sidecar = sidecar_path(options.selection);
  if (sidecar != options.selection && fs::exists(sidecar)) {
    const auto meta = nlohmann::json::parse(io::read_file(sidecar), nullptr, false);
    if (meta.is_object()) {
      if (meta.contains("method") && meta["method"].is_string()) selection.method = meta["method"];
      if (meta.contains("seed") && meta["seed"].is_number_unsigned()) selection.seed = meta["seed"];
    }
  }
  const EvalReport report = evaluate_selection(selection, data.mispredicted(), data.faults(), data.normalized());
  const std::string text = to_json(report).dump(2) + "\n";
  if (options.out.empty()) {
    std::cout << text;
  } else {
    io::write_file(options.out, text);
  }
  return 0;
}

int run_compare(const CompareOptions& options) {
  if (options.repeats < 1) throw ConfigError("--repeats must be at least 1");
  if (options.methods.empty()) throw ConfigError("--methods must name at least one method");
  const RunManifest manifest = RunManifest::load(options.manifest);
  const RunData data(manifest);
  const SearchParams base = params_for(manifest, options.profile, options.budget, options.seed);

  std::vector<MethodSpec> specs;
  for (const auto& text : options.methods) specs.push_back(parse_method_spec(text));
  for (const auto& spec : specs) {
    if (spec.method == Method::deepgd) base.validate(data.rows());
  }

  const std::size_t jobs = specs.size() * options.repeats;
  std::vector<EvalReport> reports(jobs);
  parallel_for(jobs, default_worker_count(), [&](std::size_t job) {
    const MethodSpec& spec = specs[job / options.repeats];
    const std::size_t run = job % options.repeats;
    SearchParams params = base;
    params.seed = base.seed + run;
    params.workers = 1;
    if (spec.variant) params.variant = *spec.variant;
    SelectionResult result = run_method(spec.method, data, params);
    result.method = spec.label;
    reports[job] = evaluate_selection(result, data.mispredicted(), data.faults(), data.normalized());
  });

  std::string csv = "method,run,seed,fdr,faults_revealed,mispredictions,log_gd\n";
  for (std::size_t job = 0; job < jobs; ++job) {
    const EvalReport& r = reports[job];
    csv += r.method + "," + std::to_string(job % options.repeats) + "," + std::to_string(r.seed) + "," +
           io::format_double(r.fdr) + "," + std::to_string(r.faults_revealed) + "," +
           std::to_string(r.mispredictions) + "," + format_log_gd(r.log_gd) + "\n";
  }
  io::write_file(options.out_csv, csv);

  Json summary;
  summary["budget"] = base.budget;
  summary["repeats"] = options.repeats;
  summary["base_seed"] = base.seed;
  summary["search"] = to_json(base);
  auto fdrs_of = [&](std::size_t method_index) {
    std::vector<double> values;
    for (std::size_t run = 0; run < options.repeats; ++run) {
      values.push_back(reports[method_index * options.repeats + run].fdr);
    }
    return values;
  };
  if (options.repeats < 2) {
    std::cerr << "warning: stability statistics need at least two runs; omitted\n";
  }
  std::optional<std::size_t> reference;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].label == "deepgd") reference = i;
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    Json entry;
    const auto fdrs = fdrs_of(i);
    entry["fdr"] = fdrs;
    if (options.repeats >= 2) entry["stability"] = to_json(stability_stats(fdrs));
    if (reference && *reference != i) {
      const auto ref = fdrs_of(*reference);
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t run = 0; run < fdrs.size(); ++run) pairs.emplace_back(ref[run], fdrs[run]);
      try {
        entry["wilcoxon_vs_deepgd"]["two_sided_p"] = wilcoxon_signed_rank(pairs, Alternative::two_sided).p_value;
        entry["wilcoxon_vs_deepgd"]["deepgd_greater_p"] = wilcoxon_signed_rank(pairs, Alternative::greater).p_value;
      } catch (const SampleSizeError& e) {
        entry["wilcoxon_vs_deepgd"] = nullptr;
        entry["wilcoxon_note"] = e.what();
      }
    }
    summary["methods"][specs[i].label] = entry;
  }
  io::write_file(options.out_json, summary.dump(2) + "\n");
  return 0;
}

int run_cluster_faults(const ClusterOptions& options) {
  RunManifest manifest = RunManifest::load(options.manifest);
  manifest.clusters.clear();
  const RunData data(manifest);
  const FaultFeatures fault_features = build_fault_features(data.normalized(), data.labels(), data.probabilities(),
                                                            data.mispredicted(), options.class_weight);
  std::vector<std::pair<std::size_t, std::int64_t>> rows;
  if (!fault_features.ids.empty()) {
    const auto labels = dbscan_cluster(fault_features.rows, options.eps, options.min_points);
    for (std::size_t k = 0; k < labels.size(); ++k) rows.emplace_back(fault_features.ids[k], labels[k]);
  }
  io::write_id_values(options.out, rows);
  std::size_t clusters = 0;
  std::size_t noise = 0;
  for (const auto& [id, label] : rows) {
    if (label == kNoiseCluster) ++noise;
    clusters = std::max<std::size_t>(clusters, static_cast<std::size_t>(label + 1));
  }
  std::cerr << "mispredicted " << rows.size() << " clusters " << clusters << " noise " << noise << "\n";
  return 0;
}

int run_validate(const ValidateOptions& options) {
  const RunManifest manifest = RunManifest::load(options.manifest);
  const RunData data(manifest);
  Json report;
  report["n"] = data.rows();
  report["m"] = data.probabilities().classes();
  report["d"] = data.features().cols();
  report["budget"] = manifest.budget;
  if (data.has_labels()) {
    std::size_t wrong = 0;
    for (const bool b : data.mispredicted()) wrong += b ? 1 : 0;
    report["mispredicted"] = wrong;
  }
  if (data.has_faults()) {
    report["total_faults"] = data.faults().total_faults;
    for (InputId i = 0; i < data.rows(); ++i) {
      if (data.mispredicted()[i] && !data.faults().cluster_of.contains(i)) {
        throw CoverageError("mispredicted input " + std::to_string(i) + " has no cluster label");
      }
    }
  }
  if (manifest.budget > data.rows()) throw BudgetError("manifest budget exceeds dataset size");
  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_gen_synthetic(const SyntheticOptions& options) {
  SyntheticParams params;
  params.rows = options.n;
  params.classes = options.m;
  params.dims = options.d;
  params.faults = options.faults;
  params.mispredict_rate = options.mispredict_rate;
  params.correlation = options.correlation;
  params.seed = options.seed;
  params.validate();
  if (options.budget < 1 || options.budget > options.n) throw BudgetError("--budget must lie in [1, n]");
  const SyntheticDataset dataset = generate_synthetic(params);
  write_synthetic(dataset, params, options.out, options.budget);
  std::cerr << "mispredicted " << dataset.mispredicted << " faults " << params.faults << " correlation "
            << io::format_double(dataset.achieved_correlation) << "\n";
  return 0;
}

}  // namespace deepselect::cli
