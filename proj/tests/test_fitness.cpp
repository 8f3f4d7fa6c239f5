#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "deepselect/error.hpp"
#include "deepselect/fitness.hpp"
#include "support.hpp"

using namespace deepselect;
using namespace deepselect::testing;

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

TEST_CASE("Gini score") {
  std::vector<double> one_hot(10, 0.0);
  one_hot[0] = 1.0;
  CHECK(gini_score(one_hot) == 0.0);
  CHECK(gini_score(std::vector<double>{0.5, 0.5}) == 0.5);
  CHECK(gini_score(std::vector<double>(10, 0.1)) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK_THROWS_AS(gini_score(std::vector<double>{0.6, 0.6}), ValueError);
  CHECK_THROWS_AS(gini_score(std::vector<double>{1.0}), ValueError);
}

TEST_CASE("subset Gini is the mean score") {
  const auto p = probs({{0.5, 0.5}, {1, 0}, {0.9, 0.1}});
  CHECK(subset_gini(p, std::vector<InputId>{0}) == 0.5);
  CHECK(subset_gini(p, std::vector<InputId>{1, 0}) == 0.25);
  const double expected = (oracle_gini(p.row(1)) + oracle_gini(p.row(0)) + oracle_gini(p.row(2))) / 3.0;
  CHECK(subset_gini(p, std::vector<InputId>{1, 0, 2}) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(expected == doctest::Approx(0.68 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(subset_gini(p, std::vector<InputId>{}), EmptySubsetError);
  CHECK_THROWS_AS(subset_gini(p, std::vector<InputId>{3}), IndexError);
  CHECK_THROWS_AS(subset_gini(p, std::vector<InputId>{0, 0}), ValueError);
}

TEST_CASE("min-max normalization") {
  const auto f = normalize_features(FeatureMatrix::from_matrix(from_rows({{2, 5, -1}, {4, 5, 1}, {6, 5, 0}})));
  CHECK(f.row(0)[0] == 0.0);
  CHECK(f.row(1)[0] == 0.5);
  CHECK(f.row(2)[0] == 1.0);
  for (InputId i = 0; i < 3; ++i) CHECK(f.row(i)[1] == 0.0);
  CHECK(f.row(0)[2] == 0.0);
  CHECK(f.row(1)[2] == 1.0);
}

TEST_CASE("log geometric diversity examples") {
  SUBCASE("orthonormal rows") {
    const auto f = unit_features({{1, 0}, {0, 1}});
    CHECK(log_geometric_diversity(f, std::vector<InputId>{0, 1}) == doctest::Approx(0.0));
  }
  SUBCASE("identical rows are singular") {
    const auto f = unit_features({{0.3, 0.7}, {0.3, 0.7}});
    CHECK(log_geometric_diversity(f, std::vector<InputId>{0, 1}) == kNegInf);
  }
  SUBCASE("rows [1,0] and [1,1]") {
    const auto f = unit_features({{1, 0}, {1, 1}});
    const std::vector<InputId> s{0, 1};
    CHECK(cofactor_det(gram_oracle(f, s)) == 1.0);
    CHECK(std::abs(log_geometric_diversity(f, s)) < 1e-14);
  }
  SUBCASE("zero vector") {
    const auto f = unit_features({{0, 0}, {1, 0}});
    CHECK(log_geometric_diversity(f, std::vector<InputId>{0, 1}) == kNegInf);
  }
}

TEST_CASE("log GD matches the cofactor determinant oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + rng.uniform_index(6);
    const std::size_t n = 8 + rng.uniform_index(10);
    const auto f = random_features(rng, n, d);
    const std::size_t k = 1 + rng.uniform_index(6);
    const auto s = rng.sample_without_replacement(n, k);
    const double expected = oracle_log_gd(f, s);
    if (!std::isfinite(expected)) continue;
    CHECK(close_relative(log_geometric_diversity(f, s), expected, 1e-8));
  }
}

TEST_CASE("log GD is invariant under subset permutation") {
  Rng rng(4);
  const auto f = random_features(rng, 60, 8);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = rng.sample_without_replacement(60, 2 + rng.uniform_index(20));
    const double base = log_geometric_diversity(f, s);
    std::shuffle(s.begin(), s.end(), rng);
    CHECK(close_relative(log_geometric_diversity(f, s), base, 1e-10));
  }
}

TEST_CASE("GD contribution examples") {
  SUBCASE("orthonormal pair") {
    const auto f = unit_features({{1, 0}, {0, 1}});
    CHECK(gd_contribution(f, std::vector<InputId>{0, 1}, 1) == doctest::Approx(0.0));
  }
  SUBCASE("duplicated pair") {
    const auto f = unit_features({{1, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    CHECK(gd_contribution(f, std::vector<InputId>{0, 1, 2}, 1) == kNegInf);
  }
  SUBCASE("three rows in two dimensions") {
    const auto f = unit_features({{1, 0}, {1, 1}, {0, 1}});
    const std::vector<InputId> s{0, 1, 2};
    const std::vector<InputId> rest{0, 2};
    const double expected = std::log(cofactor_det(gram_oracle(f, s))) - std::log(cofactor_det(gram_oracle(f, rest)));
    CHECK(gd_contribution(f, s, 1) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("non-members are rejected") {
    const auto f = unit_features({{1, 0}, {0, 1}});
    CHECK_THROWS_AS(gd_contribution(f, std::vector<InputId>{0, 1}, 2), MembershipError);
  }
}

TEST_CASE("fast contributions agree with direct evaluation") {
  Rng rng(9);
  for (const std::size_t d : {3u, 6u, 12u}) {
    const auto p = random_probabilities(rng, 80, 3);
    const auto f = random_features(rng, 80, d);
    const FitnessModel model(p, f);
    for (int trial = 0; trial < 40; ++trial) {
      const auto s = rng.sample_without_replacement(80, 2 + rng.uniform_index(20));
      const auto fast = model.gd_contributions(s);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double direct = gd_contribution(f, s, s[i]);
        if (std::isinf(direct) || std::isinf(fast[i])) {
          CHECK(fast[i] == direct);
        } else {
          CHECK(std::abs(fast[i] - direct) <= 1e-7 * std::max(1.0, std::abs(direct)));
        }
      }
    }
  }
}

TEST_CASE("fast contributions fall back on singular subsets") {
  const auto p = probs(with_anchor_rows({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}));
  const auto f = unit_features({{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const FitnessModel model(p, f);
  const std::vector<InputId> s{0, 1, 2};
  const auto c = model.gd_contributions(s);
  CHECK(c[0] == kNegInf);
  CHECK(c[1] == kNegInf);
  CHECK(c[2] == 0.0);
}

TEST_CASE("fitness pair examples") {
  SUBCASE("singleton") {
    const auto p = probs(with_anchor_rows({{0.5, 0.5}}));
    const auto f = unit_features({{1, 0}});
    const auto fit = evaluate_fitness(p, f, std::vector<InputId>{0});
    CHECK(fit.gini == 0.5);
    CHECK(fit.log_gd == doctest::Approx(0.0));
  }
  SUBCASE("duplicate features") {
    const auto p = probs(with_anchor_rows({{0.5, 0.5}, {0.9, 0.1}}));
    const auto f = unit_features({{0.2, 0.4}, {0.2, 0.4}});
    const auto fit = evaluate_fitness(p, f, std::vector<InputId>{0, 1});
    CHECK(fit.gini == doctest::Approx((0.5 + 0.18) / 2));
    CHECK(fit.log_gd == kNegInf);
  }
  SUBCASE("orthonormal one-hot") {
    const auto p = probs(with_anchor_rows({{1, 0}, {0, 1}}));
    const auto f = unit_features({{1, 0}, {0, 1}});
    const auto fit = evaluate_fitness(p, f, std::vector<InputId>{0, 1});
    CHECK(fit.gini == 0.0);
    CHECK(fit.log_gd == doctest::Approx(0.0));
  }
  SUBCASE("model evaluation equals the free function") {
    Rng rng(1);
    const auto pr = random_probabilities(rng, 40, 4);
    const auto fr = random_features(rng, 40, 5);
    const FitnessModel model(pr, fr);
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = rng.sample_without_replacement(40, 1 + rng.uniform_index(10));
      const auto a = model.evaluate(s);
      const auto b = evaluate_fitness(pr, fr, s);
      CHECK(a.gini == doctest::Approx(b.gini).epsilon(1e-14));
      CHECK(close_relative(a.log_gd, b.log_gd, 1e-14));
    }
  }
}
