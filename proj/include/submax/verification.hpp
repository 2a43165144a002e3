#pragma once

#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "submax/belief.hpp"
#include "submax/entropy_bounds.hpp"
#include "submax/entropy_provider.hpp"
#include "submax/instances.hpp"
#include "submax/maximizers.hpp"
#include "submax/noisy_bounds.hpp"
#include "submax/pac.hpp"
#include "submax/sensor_model.hpp"
#include "submax/tracking.hpp"

namespace submax {

// Statistical validations of the library's guarantees, runnable from the CLI
// (`verify <suite>`) and from the acceptance harness.

struct SuiteReport {
  explicit SuiteReport(std::string suite_name) : name(std::move(suite_name)) {}

  std::string name;
  bool pass = true;
  std::vector<std::string> lines;
  std::vector<std::string> csv_rows;  // optional per-run rows (tracking suite)

  void note(const std::string& line) { lines.push_back(line); }
  void require(bool ok, const std::string& line) {
    if (!ok) pass = false;
    lines.push_back(std::string(ok ? "ok:   " : "FAIL: ") + line);
  }
};

namespace detail_verify {

inline std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

constexpr double kNemhauserFactor = 0.63212055882855768;  // 1 - 1/e

// Random monotone-submodular instance: even indices are coverage problems,
// odd indices conditionally-independent sensor worlds with F = information
// gain. n <= 12, k <= 4, sized for exact brute force.
struct Instance {
  std::unique_ptr<ExactOracle> oracle;
  int n = 0;
  int k = 0;
};

inline Instance random_monotone_instance(std::uint64_t seed, int index) {
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(index), 0x1357));
  Instance inst;
  if (index % 2 == 0) {
    int n = 3 + static_cast<int>(uniform_below(rng, 10));       // 3..12
    int universe = 6 + static_cast<int>(uniform_below(rng, 19)); // 6..24
    double density = 0.15 + 0.35 * uniform_double(rng);
    inst.oracle = std::make_unique<CoverageOracle>(
        random_coverage_instance(rng, n, universe, density));
    inst.n = n;
  } else {
    int n = 3 + static_cast<int>(uniform_below(rng, 10));  // 3..12
    int states = 2 + static_cast<int>(uniform_below(rng, 4));
    int alphabet = 2 + static_cast<int>(uniform_below(rng, 2));
    SensorModel model = random_sensor_world(rng, n, states, alphabet);
    Belief prior = random_belief(rng, states);
    inst.oracle = std::make_unique<InformationGainOracle>(std::move(model), std::move(prior));
    inst.n = n;
  }
  inst.k = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(std::min(4, inst.n))));
  return inst;
}

}  // namespace detail_verify

// Greedy constant-factor guarantee: F(greedy) >= (1 - 1/e) F(opt) on random
// monotone submodular instances, opt by exhaustive enumeration.
inline SuiteReport verify_nemhauser(std::uint64_t seed = 12345, int instances = 200) {
  using detail_verify::fmt;
  SuiteReport report("nemhauser");
  int violations = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    auto inst = detail_verify::random_monotone_instance(seed, i);
    GroundSet x(inst.n);
    SelectionResult greedy = greedy_max(*inst.oracle, x, inst.k);
    auto [opt, opt_value] = brute_force_max(*inst.oracle, x, inst.k);
    if (opt_value > 1e-9) min_ratio = std::min(min_ratio, greedy.objective / opt_value);
    if (greedy.objective + 1e-9 < detail_verify::kNemhauserFactor * opt_value) ++violations;
  }
  report.note(fmt("instances=%d min_ratio=%.4f bound=%.4f", instances, min_ratio,
                  detail_verify::kNemhauserFactor));
  report.require(violations == 0, fmt("greedy/opt ratio violations: %d (expected 0)", violations));
  return report;
}

// Maximizer equivalences: lazy == greedy, pac with exact bounds and
// epsilon1 = 0 == greedy, lazier with R = n == greedy.
inline SuiteReport verify_equivalences(std::uint64_t seed = 12345, int instances = 200) {
  using detail_verify::fmt;
  SuiteReport report("equivalences");
  int lazy_mismatch = 0, pac_mismatch = 0, lazy_work_excess = 0;
  for (int i = 0; i < instances; ++i) {
    auto inst = detail_verify::random_monotone_instance(seed, i);
    GroundSet x(inst.n);
    SelectionResult greedy = greedy_max(*inst.oracle, x, inst.k);
    SelectionResult lazy = lazy_greedy_max(*inst.oracle, x, inst.k);
    if (!(lazy.chosen == greedy.chosen)) ++lazy_mismatch;
    if (lazy.gain_evals > greedy.gain_evals) ++lazy_work_excess;
    ExactBounds bounds(*inst.oracle);
    PacParams params{.epsilon1 = 0.0, .t = 1e-9, .max_tighten_rounds = 64};
    SelectionResult pac = pac_greedy_max(bounds, x, inst.k, params);
    if (!(pac.chosen == greedy.chosen)) ++pac_mismatch;
  }
  report.require(lazy_mismatch == 0, fmt("lazy != greedy on %d/%d instances", lazy_mismatch, instances));
  report.require(lazy_work_excess == 0,
                 fmt("lazy gain evals exceeded greedy on %d instances", lazy_work_excess));
  report.require(pac_mismatch == 0,
                 fmt("pac(exact bounds, eps1=0) != greedy on %d/%d instances", pac_mismatch, instances));

  int lazier_mismatch = 0;
  const int lazier_seeds = 50;
  for (int s = 0; s < lazier_seeds; ++s) {
    auto inst = detail_verify::random_monotone_instance(seed ^ 0xabcd, s % 10);
    GroundSet x(inst.n);
    SelectionResult greedy = greedy_max(*inst.oracle, x, inst.k);
    SelectionResult lazier = lazier_greedy_max(*inst.oracle, x, inst.k, inst.n,
                                               derive_seed(seed, static_cast<std::uint64_t>(s)));
    if (!(lazier.chosen == greedy.chosen)) ++lazier_mismatch;
  }
  report.require(lazier_mismatch == 0,
                 fmt("lazier(R=n) != greedy on %d/%d seeds", lazier_mismatch, lazier_seeds));
  return report;
}

// PAC selection guarantee: with a provider of exactly known per-query
// confidence, F(A^P) >= (1 - 1/e) F(A*) - k·eps1 fails in at most k·(δu+δl)
// of trials, plus three binomial standard errors.
inline SuiteReport verify_pac_bound(std::uint64_t seed = 12345, int trials_per_k = 200) {
  using detail_verify::fmt;
  SuiteReport report("pac-bound");
  const double delta_u = 0.05, delta_l = 0.05, eps1 = 0.05;
  for (int k = 1; k <= 3; ++k) {
    int violations = 0;
    for (int trial = 0; trial < trials_per_k; ++trial) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(k)));
      int n = 4 + static_cast<int>(uniform_below(rng, 5));  // 4..8
      int states = 3 + static_cast<int>(uniform_below(rng, 3));
      int alphabet = 2 + static_cast<int>(uniform_below(rng, 2));
      InformationGainOracle oracle(random_sensor_world(rng, n, states, alphabet),
                                   random_belief(rng, states));
      GroundSet x(n);
      auto [opt, opt_value] = brute_force_max(oracle, x, k);

      NoisyBounds bounds(oracle, {.width0 = 0.5,
                                  .delta_u = delta_u,
                                  .delta_l = delta_l,
                                  .shrink = 0.5,
                                  .seed = derive_seed(seed, 0x90ac, trial, k)});
      PacParams params{.epsilon1 = eps1, .t = 1e-6, .max_tighten_rounds = 64};
      SelectionResult pac = pac_greedy_max(bounds, x, k, params);
      double pac_value = oracle.evaluate(pac.chosen);
      if (pac_value < detail_verify::kNemhauserFactor * opt_value - k * eps1 - 1e-12)
        ++violations;
    }
    double budget = k * (delta_u + delta_l);
    double rate = static_cast<double>(violations) / trials_per_k;
    double threshold = budget + 3.0 * std::sqrt(budget * (1.0 - budget) / trials_per_k);
    report.require(rate <= threshold,
                   fmt("k=%d violation rate %.4f <= %.4f (budget %.2f + 3 SE, %d trials)",
                       k, rate, threshold, budget, trials_per_k));
  }
  return report;
}

// Plug-in entropy bias band: the Monte Carlo mean of the estimator sits
// inside [H + mu_M, H] for supports {2, 10, 50} and M in {20, 50, 200}.
inline SuiteReport verify_entropy_bias(std::uint64_t seed = 12345, int resamples = 10000) {
  using detail_verify::fmt;
  SuiteReport report("entropy-bias");
  const int supports[] = {2, 10, 50};
  const int sample_sizes[] = {20, 50, 200};
  for (int support : supports) {
    for (int m : sample_sizes) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(support), static_cast<std::uint64_t>(m)));
      Belief b = random_belief(rng, support);
      double h = exact_entropy(b);
      double mu = bias_floor(m, b.support());
      DiscreteSampler sampler(b.probs());
      double sum = 0.0, sum_sq = 0.0;
      SampleSet samples;
      samples.states.resize(static_cast<std::size_t>(m));
      for (int r = 0; r < resamples; ++r) {
        for (int& s : samples.states) s = sampler.sample(rng);
        double est = plugin_entropy(samples, support);
        sum += est;
        sum_sq += est * est;
      }
      double mean = sum / resamples;
      double var = std::max(0.0, sum_sq / resamples - mean * mean);
      double se = std::sqrt(var / resamples);
      bool ok = mean <= h + 3 * se && mean >= h + mu - 3 * se;
      report.require(ok, fmt("support=%d M=%d mean=%.4f in [H+mu, H]=[%.4f, %.4f] (3SE=%.4f)",
                             support, m, mean, h + mu, h, 3 * se));
    }
  }
  return report;
}

// Plug-in entropy concentration: the frequency of |H_hat - mean(H_hat)| >=
// eta never exceeds the (clipped) deviation bound over an (M, eta) grid.
inline SuiteReport verify_concentration(std::uint64_t seed = 12345, int resamples = 10000) {
  using detail_verify::fmt;
  SuiteReport report("concentration");
  const int sample_sizes[] = {50, 200, 1000};
  const double etas[] = {0.05, 0.1, 0.2, 0.4};
  for (int belief_case = 0; belief_case < 3; ++belief_case) {
    Rng setup(derive_seed(seed, 0xbe11ef, static_cast<std::uint64_t>(belief_case)));
    Belief b = belief_case == 0 ? Belief::uniform(10)
             : belief_case == 1 ? random_belief(setup, 10)
                                : random_belief(setup, 4);
    DiscreteSampler sampler(b.probs());
    for (int m : sample_sizes) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(belief_case), static_cast<std::uint64_t>(m)));
      std::vector<double> estimates(static_cast<std::size_t>(resamples));
      SampleSet samples;
      samples.states.resize(static_cast<std::size_t>(m));
      double sum = 0.0;
      for (double& est : estimates) {
        for (int& s : samples.states) s = sampler.sample(rng);
        est = plugin_entropy(samples, b.num_states());
        sum += est;
      }
      double mean = sum / resamples;
      for (double eta : etas) {
        int exceed = 0;
        for (double est : estimates)
          if (std::fabs(est - mean) >= eta) ++exceed;
        double freq = static_cast<double>(exceed) / resamples;
        double delta = paninski_delta(m, eta);
        report.require(freq <= delta,
                       fmt("belief=%d M=%d eta=%.2f freq=%.4f <= delta=%.4f",
                           belief_case, m, eta, freq, delta));
      }
    }
  }
  return report;
}

// Coarsening inequality: conditioning on a coarsened observation never
// lowers the exact conditional entropy, for random worlds and cluster maps.
inline SuiteReport verify_coarsening(std::uint64_t seed = 12345, int instances = 1000) {
  using detail_verify::fmt;
  SuiteReport report("coarsening");
  int violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i), 0xc0a25e));
    int n = 1 + static_cast<int>(uniform_below(rng, 4));
    int states = 2 + static_cast<int>(uniform_below(rng, 4));
    int alphabet = 2 + static_cast<int>(uniform_below(rng, 4));
    SensorModel model = random_sensor_world(rng, n, states, alphabet);
    Belief b = random_belief(rng, states);
    Subset a;
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) ids[static_cast<std::size_t>(j)] = j;
    std::size_t subset_size = uniform_below(rng, static_cast<std::uint64_t>(n + 1));
    for (int id : sample_without_replacement(rng, std::move(ids), subset_size)) a.add(id);
    CoarseningMap map = random_coarsening(rng, model, alphabet);
    double h_fine = exact_conditional_entropy(model, b, a);
    double h_coarse = exact_conditional_entropy(coarse_model(model, map), b, a);
    worst_margin = std::min(worst_margin, h_coarse - h_fine);
    if (h_coarse < h_fine - 1e-9) ++violations;
  }
  report.note(fmt("instances=%d worst (coarse - fine) margin=%.3g", instances, worst_margin));
  report.require(violations == 0, fmt("coarsening inequality violations: %d", violations));
  return report;
}

// Bound coverage directions: the entropy bound provider's U >= F and
// F >= L each hold with frequency >= 1 - delta - 3 SE against the exact
// objective on an enumerable world.
inline SuiteReport verify_bound_coverage(std::uint64_t seed = 12345, int trials = 500) {
  using detail_verify::fmt;
  SuiteReport report("coverage-of-bounds");
  SensorModel model = flip_noise_world(6, {{0, 1, 2}, {1, 3, 5}, {2, 4}}, 0.1);
  Rng setup(derive_seed(seed, 0xc0ffee));
  Belief prior = random_belief(setup, 6);

  std::vector<Subset> queries = {Subset{0}, Subset{1}, Subset{2}, Subset{0, 1}, Subset{1, 2}};
  std::vector<double> exact;
  exact.reserve(queries.size());
  for (const Subset& a : queries) exact.push_back(-exact_conditional_entropy(model, prior, a));

  EntropyBoundConfig cfg;  // paper-default budgets
  std::uint64_t upper_ok = 0, lower_ok = 0, events = 0;
  for (int trial = 0; trial < trials; ++trial) {
    cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(trial), 0xb0);
    EntropyBoundProvider provider(model, prior, cfg);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      for (int round = 0; round < 2; ++round) {
        if (round > 0) provider.tighten(queries[q]);
        double u = provider.upper(queries[q]);
        double l = provider.lower(queries[q]);
        upper_ok += u >= exact[q] - 1e-12 ? 1 : 0;
        lower_ok += l <= exact[q] + 1e-12 ? 1 : 0;
        ++events;
      }
    }
  }
  double delta = cfg.delta_eta;
  double threshold = 1.0 - delta - 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(events));
  double u_rate = static_cast<double>(upper_ok) / static_cast<double>(events);
  double l_rate = static_cast<double>(lower_ok) / static_cast<double>(events);
  report.require(u_rate >= threshold,
                 fmt("U >= F coverage %.4f >= %.4f (%llu events)", u_rate, threshold,
                     static_cast<unsigned long long>(events)));
  report.require(l_rate >= threshold,
                 fmt("F >= L coverage %.4f >= %.4f (%llu events)", l_rate, threshold,
                     static_cast<unsigned long long>(events)));
  return report;
}

// Tracking benchmark: paired shared-seed runs; pac must spend strictly less
// selection work than the greedy baseline on at least 90% of runs while
// staying within two accuracy points of it.
inline SuiteReport verify_tracking_comparison(std::uint64_t seed = 12345,
                                              int trials_per_k = 40,
                                              int timesteps = 100) {
  using detail_verify::fmt;
  SuiteReport report("tracking-comparison");
  Environment env = Environment::grid_world(GridSpec{});
  report.csv_rows.push_back("scenario,maximizer,k,seed,trial,metric,value");

  int total_runs = 0, total_wins = 0;
  for (int k = 1; k <= 3; ++k) {
    TrackingConfig base;
    base.k = k;
    base.num_timesteps = timesteps;
    base.trajectories = trials_per_k;
    base.seed = derive_seed(seed, static_cast<std::uint64_t>(k), 0x77);

    TrackingConfig greedy_cfg = base;
    greedy_cfg.maximizer = TrackerMaximizer::kGreedyEstimate;
    TrackingConfig pac_cfg = base;
    pac_cfg.maximizer = TrackerMaximizer::kPacEntropy;

    std::vector<RunRecord> greedy_runs = run_tracking_experiment(env, greedy_cfg);
    std::vector<RunRecord> pac_runs = run_tracking_experiment(env, pac_cfg);

    int wins = 0;
    double greedy_acc = 0.0, pac_acc = 0.0, ratio_sum = 0.0;
    for (int trial = 0; trial < trials_per_k; ++trial) {
      const RunRecord& g = greedy_runs[static_cast<std::size_t>(trial)];
      const RunRecord& p = pac_runs[static_cast<std::size_t>(trial)];
      if (p.work < g.work) ++wins;
      greedy_acc += g.accuracy();
      pac_acc += p.accuracy();
      double ratio = g.work > 0 ? static_cast<double>(p.work) / static_cast<double>(g.work) : 0.0;
      ratio_sum += ratio;
      report.csv_rows.push_back(fmt("tracking,pac/greedy,%d,%llu,%d,work_ratio,%.6g", k,
                                    static_cast<unsigned long long>(base.seed), trial, ratio));
      report.csv_rows.push_back(fmt("tracking,pac/greedy,%d,%llu,%d,accuracy_delta,%.6g", k,
                                    static_cast<unsigned long long>(base.seed), trial,
                                    p.accuracy() - g.accuracy()));
    }
    greedy_acc /= trials_per_k;
    pac_acc /= trials_per_k;
    total_runs += trials_per_k;
    total_wins += wins;
    report.note(fmt("k=%d pac wins %d/%d, mean work ratio %.3f, accuracy greedy=%.3f pac=%.3f",
                    k, wins, trials_per_k, ratio_sum / trials_per_k, greedy_acc, pac_acc));
    report.require(std::fabs(pac_acc - greedy_acc) <= 0.02,
                   fmt("k=%d |accuracy delta| = %.4f <= 0.02", k, std::fabs(pac_acc - greedy_acc)));
  }
  report.require(total_wins >= static_cast<int>(std::ceil(0.9 * total_runs)),
                 fmt("pac work wins %d/%d >= 90%%", total_wins, total_runs));
  return report;
}

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {
      "nemhauser", "pac-bound", "entropy-bias", "concentration", "coarsening",
      "coverage-of-bounds"};
  return names;
}

inline SuiteReport run_verify_suite(const std::string& name, std::uint64_t seed = 12345) {
  if (name == "nemhauser") return verify_nemhauser(seed);
  if (name == "pac-bound") return verify_pac_bound(seed);
  if (name == "entropy-bias") return verify_entropy_bias(seed);
  if (name == "concentration") return verify_concentration(seed);
  if (name == "coarsening") return verify_coarsening(seed);
  if (name == "coverage-of-bounds") return verify_bound_coverage(seed);
  throw std::invalid_argument("unknown verify suite '" + name + "'");
}

}  // namespace submax
