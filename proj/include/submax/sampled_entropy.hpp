#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "submax/belief.hpp"
#include "submax/oracle.hpp"
#include "submax/random.hpp"
#include "submax/sensor_model.hpp"

namespace submax {

// Particle-style estimate of the conditional entropy H_b^A(s|z).
//
// An MLE belief b̂ is formed from `m_prior` draws of b. Then `n_draws` pairs
// are generated by sampling a state from b̂ and simulating the sensors in A;
// the pairs are grouped by the simulated observation, and the estimate is the
// group-frequency-weighted sum of per-group plug-in entropies. Empirical
// group frequencies stand in for Pr(z|b,A); empty groups contribute nothing.
//
// With no sensors selected there is nothing to condition on and the estimate
// is the plug-in entropy of the prior draws themselves.
inline double sampled_conditional_entropy(const SensorModel& model, const Belief& b,
                                          const Subset& a, int m_prior, int n_draws,
                                          std::uint64_t seed) {
  if (b.num_states() != model.num_states())
    throw std::invalid_argument("sampled_conditional_entropy: belief/model state mismatch");
  if (m_prior < 1) throw std::invalid_argument("sampled_conditional_entropy: need M >= 1");
  if (n_draws < 1) throw std::invalid_argument("sampled_conditional_entropy: need N >= 1");
  for (int i : a.ids())
    if (i < 0 || i >= model.num_sensors())
      throw std::out_of_range("sampled_conditional_entropy: sensor id outside model");

  Rng rng(derive_seed(seed, 0x5a3b7e));
  DiscreteSampler prior(b.probs());
  std::vector<int> prior_samples(static_cast<std::size_t>(m_prior));
  for (int& s : prior_samples) s = prior.sample(rng);

  if (a.empty()) return plugin_entropy({prior_samples}, model.num_states());

  const int num_states = model.num_states();
  const auto& ids = a.ids();

  // Group state counts, keyed by the mixed-radix encoding of the simulated
  // observation. Dense storage for small joint spaces, hashed otherwise.
  const std::uint64_t space = model.joint_space_size(a);
  constexpr std::uint64_t kDenseLimit = 4096;
  const bool use_dense = space <= kDenseLimit;
  std::vector<std::vector<int>> dense;
  std::unordered_map<std::uint64_t, std::vector<int>> sparse;
  if (use_dense) dense.resize(static_cast<std::size_t>(space));

  auto counts_for = [&](std::uint64_t key) -> std::vector<int>& {
    std::vector<int>& counts = use_dense ? dense[static_cast<std::size_t>(key)] : sparse[key];
    if (counts.empty()) counts.assign(static_cast<std::size_t>(num_states), 0);
    return counts;
  };

  for (int j = 0; j < n_draws; ++j) {
    int s = prior_samples[uniform_below(rng, static_cast<std::uint64_t>(m_prior))];
    std::uint64_t key = 0;
    for (int i : ids) {
      key = key * static_cast<std::uint64_t>(model.alphabet(i)) +
            static_cast<std::uint64_t>(model.sample_value(i, s, rng));
    }
    ++counts_for(key)[static_cast<std::size_t>(s)];
  }

  double h = 0.0;
  auto fold = [&](const std::vector<int>& counts) {
    if (counts.empty()) return;
    int total = 0;
    for (int c : counts) total += c;
    if (total == 0) return;
    h += (static_cast<double>(total) / n_draws) * entropy_of_counts(counts, total);
  };
  if (use_dense) {
    for (const auto& counts : dense) fold(counts);
  } else {
    for (const auto& [key, counts] : sparse) fold(counts);
  }
  return h;
}

// Variant with exact observation weights: Pr(z|b̂,A) is enumerated over the
// joint observation space while the per-observation posteriors still come
// from rejection-grouped draws. Only usable when |Omega| fits under `cap`;
// the empirical-weight estimator above is the production path.
inline double sampled_conditional_entropy_exact_weights(const SensorModel& model,
                                                        const Belief& b, const Subset& a,
                                                        int m_prior, int n_draws,
                                                        std::uint64_t seed,
                                                        std::uint64_t cap = 1'000'000) {
  if (b.num_states() != model.num_states())
    throw std::invalid_argument("sampled_conditional_entropy: belief/model state mismatch");
  if (m_prior < 1) throw std::invalid_argument("sampled_conditional_entropy: need M >= 1");
  if (n_draws < 1) throw std::invalid_argument("sampled_conditional_entropy: need N >= 1");
  const std::uint64_t space = model.joint_space_size(a);
  if (space > cap)
    throw std::runtime_error("sampled_conditional_entropy_exact_weights: |Omega| = " +
                             std::to_string(space) + " exceeds cap " + std::to_string(cap));

  Rng rng(derive_seed(seed, 0x5a3b7e));
  DiscreteSampler prior(b.probs());
  std::vector<int> prior_samples(static_cast<std::size_t>(m_prior));
  for (int& s : prior_samples) s = prior.sample(rng);

  if (a.empty()) return plugin_entropy({prior_samples}, model.num_states());

  Belief b_hat = mle_belief({prior_samples}, model.num_states());
  const auto& ids = a.ids();
  const int num_states = model.num_states();

  std::vector<std::vector<int>> groups(static_cast<std::size_t>(space));
  for (int j = 0; j < n_draws; ++j) {
    int s = prior_samples[uniform_below(rng, static_cast<std::uint64_t>(m_prior))];
    std::uint64_t key = 0;
    for (int i : ids) {
      key = key * static_cast<std::uint64_t>(model.alphabet(i)) +
            static_cast<std::uint64_t>(model.sample_value(i, s, rng));
    }
    std::vector<int>& counts = groups[static_cast<std::size_t>(key)];
    if (counts.empty()) counts.assign(static_cast<std::size_t>(num_states), 0);
    ++counts[static_cast<std::size_t>(s)];
  }

  double h = 0.0;
  detail::for_each_joint_observation(model, a, [&](const JointObservation& z) {
    std::uint64_t key = 0;
    for (int i : ids)
      key = key * static_cast<std::uint64_t>(model.alphabet(i)) +
            static_cast<std::uint64_t>(z.values[static_cast<std::size_t>(i)]);
    const std::vector<int>& counts = groups[static_cast<std::size_t>(key)];
    if (!counts.empty()) {
      int total = 0;
      for (int c : counts) total += c;
      h += observation_likelihood(model, b_hat, a, z) * entropy_of_counts(counts, total);
    }
  });
  return h;
}

// Greedy-baseline oracle: F̂(A) = -Ĥ_b^A(s|z) at fixed budgets, a fresh
// substream per evaluation. posterior_draws() counts the simulated pairs,
// the work unit shared with the entropy bound provider.
class SampledObjectiveOracle final : public ExactOracle {
 public:
  SampledObjectiveOracle(const SensorModel& model, const Belief& prior, int m_prior,
                         int n_draws, std::uint64_t seed)
      : model_(model), prior_(prior), m_prior_(m_prior), n_draws_(n_draws), seed_(seed) {
    if (m_prior_ < 1 || n_draws_ < 1)
      throw std::invalid_argument("SampledObjectiveOracle: budgets must be >= 1");
  }

  int num_elements() const override { return model_.num_sensors(); }
  std::uint64_t posterior_draws() const { return posterior_draws_; }

 protected:
  double value(const Subset& a) override {
    posterior_draws_ += static_cast<std::uint64_t>(n_draws_);
    return -sampled_conditional_entropy(model_, prior_, a, m_prior_, n_draws_,
                                        derive_seed(seed_, call_counter_++));
  }

 private:
  const SensorModel& model_;
  const Belief& prior_;
  int m_prior_;
  int n_draws_;
  std::uint64_t seed_;
  std::uint64_t call_counter_ = 0;
  std::uint64_t posterior_draws_ = 0;
};

}  // namespace submax
