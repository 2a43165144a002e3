#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "submax/entropy_provider.hpp"
#include "submax/instances.hpp"
#include "submax/pac.hpp"

using namespace submax;
using Catch::Approx;

TEST_CASE("config validation") {
  EntropyBoundConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.m_fine = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.delta_eta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.d0 = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("perfect-sensor world: bounds bracket F = 0 for every seed") {
  SensorModel perfect = perfect_sensor_world(5);
  Belief b = Belief::uniform(5);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    EntropyBoundConfig cfg;
    cfg.m_fine = 32;
    cfg.m_coarse = 64;
    cfg.n_draws_fine0 = 64;
    cfg.n_draws_coarse = 64;
    cfg.seed = seed;
    EntropyBoundProvider provider(perfect, b, cfg);
    Subset a{0};
    REQUIRE(provider.upper(a) >= 0.0);
    REQUIRE(provider.lower(a) <= 0.0);
    provider.tighten(a);
    REQUIRE(provider.upper(a) >= 0.0);
    REQUIRE(provider.lower(a) <= 0.0);
  }
}

TEST_CASE("with d at the alphabet and generous budgets, U - L approaches the fixed slack") {
  SensorModel model = flip_noise_world(3, {{0}, {1, 2}}, 0.1);  // binary, so d0=2 is the cap
  Rng rng(4);
  Belief b = random_belief(rng, 3);
  EntropyBoundConfig cfg;
  cfg.m_fine = 4096;
  cfg.m_coarse = 4096;
  cfg.n_draws_fine0 = 1 << 16;
  cfg.n_draws_coarse = 1 << 16;
  cfg.d0 = 2;
  cfg.seed = 11;
  EntropyBoundProvider provider(model, b, cfg);
  Subset a{0, 1};
  double slack = provider.eta_upper() + provider.eta_lower() + provider.bias_slack();
  double width = provider.upper(a) - provider.lower(a);
  CHECK(width == Approx(slack).margin(0.05));  // both estimates concentrate on the same value
}

TEST_CASE("bounds bracket the exact objective with high frequency") {
  SensorModel model = flip_noise_world(6, {{0, 1, 2}, {1, 3, 5}, {2, 4}}, 0.1);
  Rng rng(21);
  Belief b = random_belief(rng, 6);
  Subset a{0, 2};
  double f = -exact_conditional_entropy(model, b, a);
  int u_ok = 0, l_ok = 0;
  const int seeds = 60;
  for (int s = 0; s < seeds; ++s) {
    EntropyBoundConfig cfg;
    cfg.seed = derive_seed(15, s);
    EntropyBoundProvider provider(model, b, cfg);
    if (provider.upper(a) >= f - 1e-12) ++u_ok;
    if (provider.lower(a) <= f + 1e-12) ++l_ok;
  }
  CHECK(u_ok >= static_cast<int>(0.9 * seeds));
  CHECK(l_ok >= static_cast<int>(0.9 * seeds));
}

TEST_CASE("upper never drops below lower across tighten rounds") {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(uniform_below(rng, 3));
    int states = 2 + static_cast<int>(uniform_below(rng, 4));
    int alphabet = 2 + static_cast<int>(uniform_below(rng, 3));
    SensorModel model = random_sensor_world(rng, n, states, alphabet);
    Belief b = random_belief(rng, states);
    EntropyBoundConfig cfg;
    cfg.m_fine = 32;
    cfg.m_coarse = 64;
    cfg.n_draws_fine0 = 64;
    cfg.n_draws_coarse = 64;
    cfg.seed = derive_seed(1000, trial);
    EntropyBoundProvider provider(model, b, cfg);
    Subset a{0};
    for (int round = 0; round < 3; ++round) {
      REQUIRE(provider.upper(a) >= provider.lower(a));
      provider.tighten(a);
    }
  }
}

TEST_CASE("work counts simulated posterior draws and grows under tighten") {
  SensorModel model = flip_noise_world(3, {{0}, {1}}, 0.1);
  Belief b = Belief::uniform(3);
  EntropyBoundConfig cfg;
  cfg.m_fine = 32;
  cfg.m_coarse = 64;
  cfg.n_draws_fine0 = 100;
  cfg.n_draws_coarse = 50;
  cfg.seed = 5;
  EntropyBoundProvider provider(model, b, cfg);
  CHECK(provider.posterior_draws() == 0);
  Subset a{0};
  provider.upper(a);
  CHECK(provider.posterior_draws() == 150);  // first touch computes both sides
  provider.lower(a);
  CHECK(provider.posterior_draws() == 150);  // cached
  provider.tighten(a);
  // fine doubles to 200; d was already capped so the coarse budget doubles too
  CHECK(provider.posterior_draws() == 150 + 200 + 100);
  CHECK(provider.work() == provider.posterior_draws());
}

TEST_CASE("pac greedy over entropy bounds picks the perfect sensor over the uninformative one") {
  // sensor 0 tells nothing (uniform rows), sensor 1 reports the state exactly
  std::vector<std::vector<double>> tables = {
      {1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3},
      {1, 0, 0, 0, 1, 0, 0, 0, 1}};
  SensorModel model(3, {3, 3}, std::move(tables));
  Belief b = Belief::uniform(3);
  GroundSet x(2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EntropyBoundConfig cfg;
    cfg.m_fine = 64;
    cfg.m_coarse = 256;
    cfg.n_draws_fine0 = 128;
    cfg.n_draws_coarse = 256;
    cfg.seed = derive_seed(500, seed);
    EntropyBoundProvider provider(model, b, cfg);
    SelectionResult r = pac_greedy_max(provider, x, 1, PacParams{0.0, 0.01, 8});
    REQUIRE(r.chosen.ids() == std::vector<int>{1});
  }
}

TEST_CASE("provider state is independent across subsets") {
  SensorModel model = flip_noise_world(3, {{0}, {1}}, 0.1);
  Belief b = Belief::uniform(3);
  EntropyBoundConfig cfg;
  cfg.m_fine = 32;
  cfg.m_coarse = 64;
  cfg.n_draws_fine0 = 64;
  cfg.n_draws_coarse = 64;
  cfg.seed = 6;
  EntropyBoundProvider provider(model, b, cfg);
  double u0 = provider.upper(Subset{0});
  double u1 = provider.upper(Subset{1});
  provider.tighten(Subset{0});
  CHECK(provider.upper(Subset{1}) == u1);  // untouched subset keeps its cached bounds
  CHECK(provider.upper(Subset{0}) != u0);  // overwhelmingly likely after a redraw
}
