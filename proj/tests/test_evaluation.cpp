#include <doctest.h>

#include <cmath>
#include <set>

#include "deepselect/error.hpp"
#include "deepselect/evaluation.hpp"
#include "deepselect/kernels.hpp"
#include "support.hpp"

using namespace deepselect;
using namespace deepselect::testing;

namespace {

// Four faults over ten mispredicted inputs: 0-1 -> 0, 2-3 -> 1, 4-5 -> 2, 6-7 -> 3, 8-9 noise.
struct FaultFixture {
  std::vector<bool> mask;
  FaultPartition faults;
  FaultFixture() : mask(20, false) {
    std::vector<std::pair<InputId, std::int64_t>> labels;
    for (InputId i = 0; i < 10; ++i) {
      mask[i] = true;
      labels.emplace_back(i, i < 8 ? static_cast<std::int64_t>(i / 2) : kNoiseCluster);
    }
    faults = FaultPartition::from_labels(labels, mask);
  }
};

// Textbook DBSCAN: core points are found first, then clusters grow layer by
// layer from each unassigned core point in index order.
struct ReferenceDbscan {
  const Matrix& points;
  double eps;
  std::size_t min_points;
  std::vector<std::int64_t> labels;

  std::vector<std::size_t> region(std::size_t p) const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < points.rows(); ++q) {
      double sq = 0.0;
      for (std::size_t t = 0; t < points.cols(); ++t) sq += (points(p, t) - points(q, t)) * (points(p, t) - points(q, t));
      if (sq <= eps * eps) out.push_back(q);
    }
    return out;
  }

  std::vector<std::int64_t> run() {
    const std::size_t n = points.rows();
    labels.assign(n, kNoiseCluster);
    std::vector<bool> assigned(n, false);
    std::int64_t cluster = 0;
    std::vector<bool> is_core(n);
    for (std::size_t p = 0; p < n; ++p) is_core[p] = region(p).size() >= min_points;
    for (std::size_t p = 0; p < n; ++p) {
      if (assigned[p] || !is_core[p]) continue;
      // Breadth-first closure over core points reached from p.
      std::vector<std::size_t> layer{p};
      assigned[p] = true;
      labels[p] = cluster;
      while (!layer.empty()) {
        std::vector<std::size_t> next;
        for (const std::size_t q : layer) {
          if (!is_core[q]) continue;
          for (const std::size_t r : region(q)) {
            if (assigned[r]) continue;
            assigned[r] = true;
            labels[r] = cluster;
            next.push_back(r);
          }
        }
        layer = std::move(next);
      }
      ++cluster;
    }
    return labels;
  }
};

}  // namespace

TEST_CASE("faults revealed") {
  const FaultFixture fx;
  CHECK(faults_revealed(std::vector<InputId>{10, 11, 12}, fx.mask, fx.faults).empty());
  CHECK(faults_revealed(std::vector<InputId>{0, 1, 12}, fx.mask, fx.faults) == std::set<std::int64_t>{0});
  CHECK(faults_revealed(std::vector<InputId>{0, 2, 4, 6}, fx.mask, fx.faults).size() == 4);
  CHECK(faults_revealed(std::vector<InputId>{8, 9}, fx.mask, fx.faults).empty());
}

TEST_CASE("fault detection rate worked examples") {
  const FaultFixture fx;
  REQUIRE(fx.faults.total_faults == 4);
  CHECK(fault_detection_rate(std::vector<InputId>{0, 2, 4, 6, 10, 11, 12, 13, 14, 15}, fx.mask, fx.faults) == 1.0);
  CHECK(fault_detection_rate(std::vector<InputId>{0, 1, 12}, fx.mask, fx.faults) == 1.0 / 3.0);
  CHECK(fault_detection_rate(std::vector<InputId>{10, 11, 12}, fx.mask, fx.faults) == 0.0);
  CHECK(fault_detection_rate(std::vector<InputId>{0, 2}, fx.mask, fx.faults) == 1.0);
  CHECK_THROWS_AS(fault_detection_rate(std::vector<InputId>{}, fx.mask, fx.faults), EmptySubsetError);
}

TEST_CASE("evaluation report") {
  const FaultFixture fx;
  Rng rng(3);
  const auto f = random_features(rng, 20, 4);
  SelectionResult sel;
  sel.subset = {0, 1, 2, 12};
  sel.method = "gini";
  sel.budget = 4;
  const auto report = evaluate_selection(sel, fx.mask, fx.faults, f);
  CHECK(report.fdr == 0.5);
  CHECK(report.faults_revealed == 2);
  CHECK(report.total_faults == 4);
  CHECK(report.mispredictions == 3);
  CHECK(close_relative(report.log_gd, oracle_log_gd(f, sel.subset), 1e-9));
  CHECK(to_json(report)["fdr"] == 0.5);
  sel.subset = {0, 25, 1, 2};
  CHECK_THROWS_AS(evaluate_selection(sel, fx.mask, fx.faults, f), ValidationError);
}

TEST_CASE("DBSCAN examples") {
  SUBCASE("two separated blobs") {
    const Matrix m = from_rows({{0, 0}, {0.1, 0}, {0, 0.1}, {5, 5}, {5.1, 5}, {5, 5.1}});
    const auto labels = dbscan_cluster(m, 0.5, 3);
    CHECK(labels == std::vector<std::int64_t>{0, 0, 0, 1, 1, 1});
  }
  SUBCASE("sparse points are noise") {
    const Matrix m = from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK(dbscan_cluster(m, 0.5, 2) == std::vector<std::int64_t>(4, kNoiseCluster));
  }
  SUBCASE("border points join the first cluster that reaches them") {
    // Input 0 lies within eps of a core point of each blob but is not a core point itself.
    const Matrix m = from_rows({{0.6}, {0}, {0.05}, {0.1}, {0.2}, {1.0}, {1.1}, {1.15}, {1.2}});
    const auto labels = dbscan_cluster(m, 0.4, 4);
    CHECK(labels == std::vector<std::int64_t>{0, 0, 0, 0, 0, 1, 1, 1, 1});
  }
  SUBCASE("invalid parameters") {
    const Matrix m = from_rows({{0}});
    CHECK_THROWS_AS(dbscan_cluster(m, 0.0, 2), ValueError);
    CHECK_THROWS_AS(dbscan_cluster(m, 1.0, 0), ValueError);
  }
}

TEST_CASE("DBSCAN matches a reference implementation") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    Rows rows(30, std::vector<double>(2));
    for (auto& r : rows) {
      const double cx = static_cast<double>(rng.uniform_index(3));
      for (double& v : r) v = cx + 0.3 * rng.normal();
    }
    const Matrix m = from_rows(rows);
    const double eps = 0.15 + 0.05 * static_cast<double>(trial % 6);
    const std::size_t min_points = 2 + static_cast<std::size_t>(trial % 4);
    ReferenceDbscan ref{m, eps, min_points, {}};
    CHECK(dbscan_cluster(m, eps, min_points) == ref.run());
  }
}

TEST_CASE("DBSCAN partition is invariant under point permutation") {
  Rng rng(19);
  Rows rows(40, std::vector<double>(3));
  for (auto& r : rows) {
    const double c = 3.0 * static_cast<double>(rng.uniform_index(4));
    for (double& v : r) v = c + 0.2 * rng.normal();
  }
  const auto base = dbscan_cluster(from_rows(rows), 0.6, 3);
  std::vector<std::size_t> perm(rows.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Rows shuffled;
  for (const std::size_t i : perm) shuffled.push_back(rows[i]);
  const auto labels = dbscan_cluster(from_rows(shuffled), 0.6, 3);
  const Matrix original = from_rows(rows);
  ReferenceDbscan ref{original, 0.6, 3, {}};
  std::vector<bool> core(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) core[i] = ref.region(i).size() >= 3;
  for (std::size_t a = 0; a < perm.size(); ++a) {
    CHECK((base[perm[a]] == kNoiseCluster) == (labels[a] == kNoiseCluster));
    for (std::size_t b = 0; b < perm.size(); ++b) {
      if (!core[perm[a]] || !core[perm[b]]) continue;
      CHECK((base[perm[a]] == base[perm[b]]) == (labels[a] == labels[b]));
    }
  }
}

TEST_CASE("fault features append scaled class ids") {
  const auto p = probs(with_anchor_rows({{0.3, 0.7}, {0.9, 0.1}, {0.2, 0.8}}));
  const auto f = unit_features({{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, {0.7, 0.8, 0.9}});
  const GroundTruthLabels y({0, 0, 1, 0, 0}, 2);
  const auto mask = misprediction_mask(p, y);
  CHECK(mask == std::vector<bool>{true, false, false, false, false});
  const auto ff = build_fault_features(f, y, p, mask);
  REQUIRE(ff.ids == std::vector<InputId>{0});
  CHECK(ff.rows.cols() == 5);
  CHECK(ff.rows(0, 3) == 0.0);
  CHECK(ff.rows(0, 4) == 1.0);
  CHECK(ff.rows(0, 0) == doctest::Approx(0.1));

  const std::vector<bool> none(5, false);
  CHECK(build_fault_features(f, y, p, none).ids.empty());
}
