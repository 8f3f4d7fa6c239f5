// deepselect: budgeted test-input selection from model outputs and features.
//
// Exit codes: 0 success, 2 usage or validation error, 1 internal error.

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "deepselect/error.hpp"

int main(int argc, char** argv) {
  using namespace deepselect::cli;

  CLI::App app{"Uncertainty- and diversity-driven test input selection"};
  app.require_subcommand(1);

  SelectOptions select;
  auto* select_cmd = app.add_subcommand("select", "Select a budgeted subset of inputs");
  select_cmd->add_option("manifest", select.manifest, "Run manifest (JSON)")->required();
  select_cmd->add_option("--method", select.method, "deepgd | random | gini | maxp");
  select_cmd->add_option("--budget", select.budget, "Number of inputs to select");
  select_cmd->add_option("--seed", select.seed, "Random seed");
  select_cmd->add_option("--profile", select.profile, "paper (700/300) | desk (100/50)");
  select_cmd->add_option("--variant", select.variant,
                         "full | simple_crossover | simple_mutation | gini_only_mutation | gd_only_mutation");
  select_cmd->add_option("--out", select.out, "Selection CSV; a .json sidecar is written next to it");
  select_cmd->add_flag("--verbose,-v", select.verbose, "Log one line per generation to stderr");

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a selection by fault detection rate");
  evaluate_cmd->add_option("selection", evaluate.selection, "Selection CSV (id column)")->required();
  evaluate_cmd->add_option("manifest", evaluate.manifest, "Run manifest with labels and clusters")->required();
  evaluate_cmd->add_option("--out", evaluate.out, "Report JSON (default: stdout)");

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Repeated runs of several methods with statistics");
  compare_cmd->add_option("manifest", compare.manifest, "Run manifest with labels and clusters")->required();
  compare_cmd->add_option("--methods", compare.methods, "Methods, optionally deepgd:<variant>")->delimiter(',');
  compare_cmd->add_option("--repeats", compare.repeats, "Runs per method (seeds seed..seed+k-1)");
  compare_cmd->add_option("--budget", compare.budget, "Number of inputs to select");
  compare_cmd->add_option("--seed", compare.seed, "Base seed");
  compare_cmd->add_option("--profile", compare.profile, "paper | desk");
  compare_cmd->add_option("--out-csv", compare.out_csv, "Per-run rows");
  compare_cmd->add_option("--out-json", compare.out_json, "Stability statistics and Wilcoxon p-values");

  ClusterOptions cluster;
  auto* cluster_cmd = app.add_subcommand("cluster-faults", "Estimate faults by clustering mispredicted inputs");
  cluster_cmd->add_option("manifest", cluster.manifest, "Run manifest with labels")->required();
  cluster_cmd->add_option("--eps", cluster.eps, "Neighbourhood radius");
  cluster_cmd->add_option("--min-pts", cluster.min_points, "Points (self included) that make a core point");
  cluster_cmd->add_option("--class-weight", cluster.class_weight, "Weight of the two class columns");
  cluster_cmd->add_option("--out", cluster.out, "Cluster labels CSV (id,value)");

  ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "Load and cross-check every file of a manifest");
  validate_cmd->add_option("manifest", validate.manifest, "Run manifest")->required();

  SyntheticOptions synthetic;
  auto* synthetic_cmd = app.add_subcommand("gen-synthetic", "Generate a synthetic subject with planted faults");
  synthetic_cmd->add_option("--n", synthetic.n, "Inputs");
  synthetic_cmd->add_option("--m", synthetic.m, "Classes");
  synthetic_cmd->add_option("--d", synthetic.d, "Feature dimensions");
  synthetic_cmd->add_option("--faults", synthetic.faults, "Planted faults");
  synthetic_cmd->add_option("--mispredict-rate", synthetic.mispredict_rate, "Fraction of mispredicted inputs");
  synthetic_cmd->add_option("--correlation", synthetic.correlation, "Target Pearson(Gini, mispredicted)");
  synthetic_cmd->add_option("--seed", synthetic.seed, "Random seed");
  synthetic_cmd->add_option("--budget", synthetic.budget, "Budget written into the manifest");
  synthetic_cmd->add_option("--out", synthetic.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*select_cmd) return run_select(select);
    if (*evaluate_cmd) return run_evaluate(evaluate);
    if (*compare_cmd) return run_compare(compare);
    if (*cluster_cmd) return run_cluster_faults(cluster);
    if (*validate_cmd) return run_validate(validate);
    if (*synthetic_cmd) return run_gen_synthetic(synthetic);
  } catch (const deepselect::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
