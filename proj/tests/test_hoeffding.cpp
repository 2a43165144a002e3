#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "submax/hoeffding.hpp"
#include "submax/random.hpp"

using namespace submax;
using Catch::Approx;

TEST_CASE("hoeffding provider starts uninformative and validates parameters") {
  HoeffdingProvider provider(3, [](const Subset&, Rng&) { return 0.5; }, 0.0, 1.0, 0.05);
  Subset a{0};
  CHECK(provider.upper(a) == std::numeric_limits<double>::infinity());
  CHECK(provider.lower(a) == -std::numeric_limits<double>::infinity());
  CHECK(provider.upper(a) >= provider.lower(a));

  CHECK_THROWS_AS(HoeffdingProvider(3, nullptr, 1.0, 0.0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(HoeffdingProvider(3, nullptr, 0.0, 1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(HoeffdingProvider(3, nullptr, 0.0, 1.0, 0.05, 0), std::invalid_argument);
}

TEST_CASE("constant sampler: interval is centered and shrinks as N^{-1/2}") {
  const double c = 0.7, delta = 0.05;
  HoeffdingProvider provider(2, [c](const Subset&, Rng&) { return c; }, 0.0, 1.0, delta, 32);
  Subset a{1};
  provider.tighten(a);  // N = 32
  double width_32 = provider.upper(a) - provider.lower(a);
  CHECK(provider.upper(a) == Approx(c + provider.radius(32)).epsilon(1e-12));
  CHECK(provider.lower(a) == Approx(c - provider.radius(32)).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) provider.tighten(a);  // N = 128
  double width_128 = provider.upper(a) - provider.lower(a);
  CHECK(width_128 == Approx(width_32 / 2.0).epsilon(1e-12));  // 4x samples halves the radius
}

TEST_CASE("radius after a single sample matches the closed form") {
  const double delta = 0.1, lo = -2.0, hi = 3.0;
  HoeffdingProvider provider(1, [](const Subset&, Rng&) { return 0.0; }, lo, hi, delta, 1);
  Subset a{0};
  provider.tighten(a);  // N = 1
  CHECK(provider.samples(a) == 1);
  double radius = provider.upper(a) - provider.lower(a);
  CHECK(radius == Approx(2 * (hi - lo) * std::sqrt(std::log(2.0 / delta) / 2.0)).epsilon(1e-12));
}

TEST_CASE("bernoulli coverage meets the confidence target") {
  const double delta = 0.05;
  const int trials = 10000;
  int covered = 0;
  for (int t = 0; t < trials; ++t) {
    HoeffdingProvider provider(
        1, [](const Subset&, Rng& rng) { return uniform_double(rng) < 0.5 ? 1.0 : 0.0; },
        0.0, 1.0, delta, 32, derive_seed(404, t));
    Subset a{0};
    provider.tighten(a);
    if (provider.lower(a) <= 0.5 && 0.5 <= provider.upper(a)) ++covered;
  }
  double rate = static_cast<double>(covered) / trials;
  double threshold = (1.0 - delta) - 3.0 * std::sqrt(delta * (1.0 - delta) / trials);
  INFO("coverage " << rate << " threshold " << threshold);
  CHECK(rate >= threshold);
}

TEST_CASE("samples outside the declared range violate the contract") {
  HoeffdingProvider provider(1, [](const Subset&, Rng&) { return 2.0; }, 0.0, 1.0, 0.05);
  Subset a{0};
  CHECK_THROWS_AS(provider.tighten(a), contract_violation);
}

TEST_CASE("work counts samples drawn across subsets") {
  HoeffdingProvider provider(3, [](const Subset&, Rng&) { return 0.25; }, 0.0, 1.0, 0.05, 8);
  provider.tighten(Subset{0});
  provider.tighten(Subset{1});
  provider.tighten(Subset{0});
  CHECK(provider.work() == 24);
  CHECK(provider.samples(Subset{0}) == 16);
  CHECK(provider.samples(Subset{1}) == 8);
  CHECK(provider.samples(Subset{2}) == 0);
}

TEST_CASE("tighten shrinks the expected upper bound") {
  const int trials = 3000;
  double delta_sum = 0.0, delta_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    HoeffdingProvider provider(
        1, [](const Subset&, Rng& rng) { return uniform_double(rng); }, 0.0, 1.0, 0.1, 16,
        derive_seed(17, t));
    Subset a{0};
    provider.tighten(a);
    double u1 = provider.upper(a);
    provider.tighten(a);
    double d = provider.upper(a) - u1;
    delta_sum += d;
    delta_sq += d * d;
  }
  double mean = delta_sum / trials;
  double se = std::sqrt(std::max(0.0, delta_sq / trials - mean * mean) / trials);
  CHECK(mean <= 3 * se);
  CHECK(mean < 0.0);  // radius shrink dominates mean wobble
}
