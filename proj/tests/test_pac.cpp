#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "submax/instances.hpp"
#include "submax/maximizers.hpp"
#include "submax/noisy_bounds.hpp"
#include "submax/pac.hpp"
#include "submax/set_functions.hpp"

using namespace submax;

namespace {

// Deliberately broken provider: upper below lower.
class InvertedBounds final : public BoundProvider {
 public:
  int num_elements() const override { return 3; }
  double upper(const Subset&) override { return -1.0; }
  double lower(const Subset&) override { return 1.0; }
  void tighten(const Subset&) override {}
};

}  // namespace

TEST_CASE("PacParams validation") {
  CHECK_THROWS_AS((PacParams{-0.1, 1e-3, 64}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((PacParams{0.0, 0.0, 64}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((PacParams{0.0, 1e-3, 0}).validate(), std::invalid_argument);
  CHECK_NOTHROW((PacParams{}).validate());
}

TEST_CASE("pac_max with exact bounds prunes everything below the leader in one pass") {
  ModularOracle values({5.0, 3.0, 1.0});
  ExactBounds bounds(values);
  PacMaxResult r = pac_max(bounds, Subset{}, PacParams{0.0, 1e-9, 64});
  CHECK(r.chosen == 0);
  CHECK(r.passes == 1);
  CHECK(r.pruned == 2);
  CHECK(r.converged);
}

TEST_CASE("pac_max with positive slack still returns the exact argmax") {
  ModularOracle values({5.0, 3.0, 1.0});
  ExactBounds bounds(values);
  PacMaxResult r = pac_max(bounds, Subset{}, PacParams{2.5, 1e-9, 64});
  CHECK(r.chosen == 0);
  CHECK(r.pruned == 2);  // 3 < 5 + 2.5 and 1 < 5 + 2.5
}

TEST_CASE("pac_max over exact bounds reduces to a greedy step") {
  Rng rng(123);
  CoverageOracle cov = random_coverage_instance(rng, 6, 14, 0.3);
  GroundSet x(6);
  SelectionResult greedy = greedy_max(cov, x, 1);
  ExactBounds bounds(cov);
  PacMaxResult r = pac_max(bounds, Subset{}, PacParams{0.0, 1e-9, 64});
  CHECK(r.chosen == greedy.chosen[0]);
}

TEST_CASE("pac_max requires a candidate outside A") {
  ModularOracle values({5.0});
  ExactBounds bounds(values);
  CHECK_THROWS_AS(pac_max(bounds, Subset{0}, PacParams{}), std::invalid_argument);
}

TEST_CASE("pac_max surfaces provider contract violations") {
  InvertedBounds bounds;
  CHECK_THROWS_AS(pac_max(bounds, Subset{}, PacParams{}), contract_violation);
}

TEST_CASE("pac_max with a converging noisy provider identifies a 0.1 gap") {
  ModularOracle values({5.0, 4.9});
  int correct = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    NoisyBounds bounds(values, {.width0 = 1.0,
                                .delta_u = 0.01,
                                .delta_l = 0.01,
                                .shrink = 0.5,
                                .seed = derive_seed(2024, s)});
    PacMaxResult r = pac_max(bounds, Subset{}, PacParams{0.0, 1e-5, 64});
    if (r.chosen == 0) ++correct;
  }
  INFO("correct identifications: " << correct << "/" << seeds);
  CHECK(correct >= static_cast<int>(0.95 * seeds));
}

TEST_CASE("pac_max never prunes the leader and respects the tighten budget") {
  Rng rng(55);
  CoverageOracle cov = random_coverage_instance(rng, 8, 20, 0.3);
  GroundSet x(8);
  const int cap = 6;
  NoisyBounds bounds(cov, {.width0 = 2.0, .delta_u = 0.05, .delta_l = 0.05, .shrink = 0.7,
                           .seed = 9});
  SelectionResult r = pac_greedy_max(bounds, x, 3, PacParams{0.1, 1e-4, cap});
  CHECK(r.chosen.size() == 3);
  for (const IterationLog& log : r.iterations) {
    CHECK(log.tighten_calls <= static_cast<std::size_t>(cap) * 8);
    for (const PacPassLog& pass : log.pass_logs) {
      CHECK(pass.leader_requeued);
      CHECK(pass.queue_size >= 1);
    }
  }
}

TEST_CASE("pac_max flags an unconverged pick when tightening stalls") {
  ModularOracle values({1.0, 1.0, 1.0});
  // shrink = 1 keeps the noise width forever; bounds never disambiguate
  NoisyBounds bounds(values, {.width0 = 5.0, .delta_u = 0.05, .delta_l = 0.05, .shrink = 1.0,
                              .seed = 3});
  PacMaxResult r = pac_max(bounds, Subset{}, PacParams{0.0, 1e-6, 5});
  CHECK(r.passes == 5);
  CHECK_FALSE(r.converged);
  CHECK(r.chosen >= 0);
}

TEST_CASE("pac_max resolves exact ties to the lowest id via the t exit") {
  ModularOracle values({2.0, 2.0, 2.0});
  ExactBounds bounds(values);
  PacMaxResult r = pac_max(bounds, Subset{}, PacParams{0.0, 1e-9, 64});
  CHECK(r.chosen == 0);
  CHECK_FALSE(r.converged);  // multiple survivors remained when movement hit zero
}

TEST_CASE("pac greedy with exact bounds and zero slack equals greedy") {
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(8, trial));
    int n = 3 + static_cast<int>(uniform_below(rng, 8));
    CoverageOracle cov = random_coverage_instance(rng, n, 16, 0.3);
    GroundSet x(n);
    int k = 1 + static_cast<int>(uniform_below(rng, 4));
    SelectionResult greedy = greedy_max(cov, x, k);
    ExactBounds bounds(cov);
    SelectionResult pac = pac_greedy_max(bounds, x, k, PacParams{0.0, 1e-9, 64});
    REQUIRE(pac.chosen == greedy.chosen);
  }
}

TEST_CASE("pac greedy with k = 0 selects nothing") {
  ModularOracle values({1.0, 2.0});
  ExactBounds bounds(values);
  GroundSet x(2);
  SelectionResult r = pac_greedy_max(bounds, x, 0, PacParams{});
  CHECK(r.chosen.empty());
  CHECK(r.iterations.empty());
}

TEST_CASE("NoisyBounds keeps U >= L at all times") {
  ModularOracle values({1.0, 2.0, 3.0});
  NoisyBounds bounds(values, {.width0 = 1.0, .delta_u = 0.2, .delta_l = 0.2, .shrink = 0.8,
                              .seed = 77});
  Subset a{1};
  for (int round = 0; round < 50; ++round) {
    REQUIRE(bounds.upper(a) >= bounds.lower(a));
    bounds.tighten(a);
  }
}

TEST_CASE("NoisyBounds per-query confidence matches its nominal rates") {
  ModularOracle values({1.0});
  Subset a{0};
  const double f = 1.0;
  const int trials = 5000;
  int upper_ok = 0, lower_ok = 0;
  for (int s = 0; s < trials; ++s) {
    NoisyBounds bounds(values, {.width0 = 1.0, .delta_u = 0.1, .delta_l = 0.2, .shrink = 0.5,
                                .seed = derive_seed(606, s)});
    if (bounds.upper(a) >= f) ++upper_ok;
    if (bounds.lower(a) <= f) ++lower_ok;
  }
  double u_rate = static_cast<double>(upper_ok) / trials;
  double l_rate = static_cast<double>(lower_ok) / trials;
  double se_u = std::sqrt(0.1 * 0.9 / trials);
  double se_l = std::sqrt(0.2 * 0.8 / trials);
  CHECK(std::fabs(u_rate - 0.9) <= 3 * se_u);
  CHECK(std::fabs(l_rate - 0.8) <= 3 * se_l);
}

TEST_CASE("tighten improves noisy bounds in expectation") {
  ModularOracle values({1.0});
  Subset a{0};
  const int trials = 4000;
  double du_sum = 0.0, dl_sum = 0.0, du_sq = 0.0, dl_sq = 0.0;
  for (int s = 0; s < trials; ++s) {
    NoisyBounds bounds(values, {.width0 = 1.0, .delta_u = 0.05, .delta_l = 0.05, .shrink = 0.5,
                                .seed = derive_seed(31, s)});
    double u0 = bounds.upper(a), l0 = bounds.lower(a);
    bounds.tighten(a);
    double du = bounds.upper(a) - u0;
    double dl = bounds.lower(a) - l0;
    du_sum += du;
    dl_sum += dl;
    du_sq += du * du;
    dl_sq += dl * dl;
  }
  double du_mean = du_sum / trials;
  double dl_mean = dl_sum / trials;
  double du_se = std::sqrt(std::max(0.0, du_sq / trials - du_mean * du_mean) / trials);
  double dl_se = std::sqrt(std::max(0.0, dl_sq / trials - dl_mean * dl_mean) / trials);
  CHECK(du_mean <= 3 * du_se);   // upper bound does not increase in expectation
  CHECK(dl_mean >= -3 * dl_se);  // lower bound does not decrease in expectation
}
