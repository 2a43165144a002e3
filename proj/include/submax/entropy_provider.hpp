#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "submax/belief.hpp"
#include "submax/entropy_bounds.hpp"
#include "submax/oracle.hpp"
#include "submax/random.hpp"
#include "submax/sampled_entropy.hpp"
#include "submax/sensor_model.hpp"

namespace submax {

struct EntropyBoundConfig {
  int m_fine = 256;          // prior samples per fine-side estimate (kept low)
  int m_coarse = 4096;       // prior samples per coarse-side estimate (kept high)
  int n_draws_fine0 = 1024;  // initial fine-side pair draws; doubled by tighten
  int n_draws_coarse = 1024; // initial coarse-side pair draws
  int d0 = 2;                // initial clusters per sensor; doubled by tighten
  double delta_eta = 0.05;   // per-side confidence target for the radii
  int support_hint = 0;      // ψ for the bias term; 0 means use |S|
  std::uint64_t seed = 0;

  void validate() const {
    if (m_fine < 2 || m_coarse < 2)
      throw std::invalid_argument("EntropyBoundConfig: prior budgets must be >= 2");
    if (n_draws_fine0 < 1 || n_draws_coarse < 1)
      throw std::invalid_argument("EntropyBoundConfig: draw budgets must be >= 1");
    if (d0 < 1) throw std::invalid_argument("EntropyBoundConfig: d0 must be >= 1");
    if (!(delta_eta > 0.0) || !(delta_eta < 1.0))
      throw std::invalid_argument("EntropyBoundConfig: delta_eta must be in (0, 1)");
    if (support_hint < 0)
      throw std::invalid_argument("EntropyBoundConfig: support_hint must be >= 0");
  }
};

// Anytime confidence bounds on F(A) = -H_b^A(s|z).
//
// Upper side: a cheap fine-grained estimate Ĥ(s|z) at low M concentrates
// below H + η with high probability, so U = -(Ĥ(s|z) - η_u).
//
// Lower side: conditioning on a coarsened observation only raises entropy,
// and the coarse-side plug-in estimate at high M is within η of its mean and
// biased by at most ln(1 + (ψ-1)/M), so L = -(Ĥ(s|r) + η_l + ln(1+(ψ-1)/M)).
//
// tighten() doubles the fine-side draw budget and doubles the cluster count;
// once d reaches the alphabet it doubles the coarse draw budget instead. Both
// sides are recomputed on a fresh substream per (subset, round). work()
// counts simulated posterior pairs.
class EntropyBoundProvider final : public BoundProvider {
 public:
  EntropyBoundProvider(SensorModel model, Belief prior, EntropyBoundConfig config)
      : model_(std::move(model)), prior_(std::move(prior)), cfg_(config) {
    cfg_.validate();
    if (prior_.num_states() != model_.num_states())
      throw std::invalid_argument("EntropyBoundProvider: belief/model state mismatch");
    eta_u_ = paninski_eta(cfg_.m_fine, cfg_.delta_eta);
    eta_l_ = paninski_eta(cfg_.m_coarse, cfg_.delta_eta);
    int psi = cfg_.support_hint > 0 ? cfg_.support_hint : model_.num_states();
    bias_slack_ = -bias_floor(cfg_.m_coarse, psi);
  }

  int num_elements() const override { return model_.num_sensors(); }

  double upper(const Subset& a) override { return state_for(a).u; }
  double lower(const Subset& a) override { return state_for(a).l; }

  void tighten(const Subset& a) override {
    State& st = state_for(a);
    st.n_draws_fine = std::min(st.n_draws_fine * 2, 1 << 24);
    advance_coarse(st);
    ++st.round;
    recompute(a, st);
  }

  std::uint64_t posterior_draws() const { return work_; }
  double eta_upper() const { return eta_u_; }
  double eta_lower() const { return eta_l_; }
  double bias_slack() const { return bias_slack_; }

 private:
  struct State {
    double u = 0.0;
    double l = 0.0;
    int n_draws_fine = 0;
    int n_draws_coarse = 0;
    int d = 0;
    int round = 0;
    std::uint64_t key_hash = 0;
  };

  // Coarse-side tightening axis: more clusters while the alphabet allows it,
  // more draws once d is capped (otherwise tightening would stop improving
  // the lower bound in expectation).
  void advance_coarse(State& st) {
    if (st.d < model_.max_alphabet()) {
      st.d = std::min(st.d * 2, model_.max_alphabet());
    } else {
      st.n_draws_coarse = std::min(st.n_draws_coarse * 2, 1 << 24);
    }
  }

  const SensorModel& coarse_for(int d) {
    auto it = coarse_cache_.find(d);
    if (it == coarse_cache_.end()) {
      it = coarse_cache_
               .emplace(d, coarse_model(model_, CoarseningMap::contiguous(model_, d)))
               .first;
    }
    return it->second;
  }

  void recompute(const Subset& a, State& st) {
    estimate(a, st);
    if (st.u < st.l) {
      // One retry at doubled budgets before declaring the contract broken.
      st.n_draws_fine = std::min(st.n_draws_fine * 2, 1 << 24);
      advance_coarse(st);
      ++st.round;
      estimate(a, st);
      if (st.u < st.l)
        throw contract_violation("EntropyBoundProvider: U < L persists for " + to_string(a));
    }
  }

  void estimate(const Subset& a, State& st) {
    double h_fine = sampled_conditional_entropy(
        model_, prior_, a, cfg_.m_fine, st.n_draws_fine,
        derive_seed(cfg_.seed, st.key_hash, static_cast<std::uint64_t>(st.round), 1));
    const SensorModel& coarse = coarse_for(st.d);
    double h_coarse = sampled_conditional_entropy(
        coarse, prior_, a, cfg_.m_coarse, st.n_draws_coarse,
        derive_seed(cfg_.seed, st.key_hash, static_cast<std::uint64_t>(st.round), 2));
    st.u = -(h_fine - eta_u_);
    st.l = -(h_coarse + eta_l_ + bias_slack_);
    work_ += static_cast<std::uint64_t>(st.n_draws_fine) +
             static_cast<std::uint64_t>(st.n_draws_coarse);
  }

  State& state_for(const Subset& a) {
    std::vector<int> key = a.sorted_ids();
    auto it = states_.find(key);
    if (it == states_.end()) {
      State st;
      std::uint64_t h = 0xb0a2d5;
      for (int id : key) h = mix64(h ^ static_cast<std::uint64_t>(id + 1));
      st.key_hash = h;
      st.n_draws_fine = cfg_.n_draws_fine0;
      st.n_draws_coarse = cfg_.n_draws_coarse;
      st.d = std::min(cfg_.d0, model_.max_alphabet());
      it = states_.emplace(std::move(key), st).first;
      recompute(a, it->second);
    }
    return it->second;
  }

  SensorModel model_;
  Belief prior_;
  EntropyBoundConfig cfg_;
  double eta_u_ = 0.0;
  double eta_l_ = 0.0;
  double bias_slack_ = 0.0;
  std::map<std::vector<int>, State> states_;
  std::map<int, SensorModel> coarse_cache_;
};

}  // namespace submax
