#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "submax/ground_set.hpp"
#include "submax/oracle.hpp"
#include "submax/random.hpp"

namespace submax {

// Bound provider with exactly known per-query confidence, wrapping an exact
// oracle. Each (re)draw for a subset sets
//
//   estimate = F(A) + width·u,  u ~ Uniform(-1, 1)
//   U = estimate + width·(1 - 2δ_u)
//   L = estimate - width·(1 - 2δ_l)
//
// so Pr[U >= F] = 1 - δ_u and Pr[L <= F] = 1 - δ_l hold with equality per
// draw, and U >= L always (δ_u + δ_l <= 1). tighten() scales width by
// `shrink` and redraws, so bounds converge to F when shrink < 1. work()
// counts draws.
class NoisyBounds final : public BoundProvider {
 public:
  struct Options {
    double width0 = 1.0;
    double delta_u = 0.05;
    double delta_l = 0.05;
    double shrink = 0.5;
    std::uint64_t seed = 0;
  };

  NoisyBounds(ExactOracle& oracle, Options opt) : oracle_(&oracle), opt_(opt) {
    if (!(opt_.width0 > 0)) throw std::invalid_argument("NoisyBounds: width0 must be > 0");
    if (opt_.delta_u < 0 || opt_.delta_l < 0 || opt_.delta_u + opt_.delta_l > 1.0)
      throw std::invalid_argument("NoisyBounds: need delta_u, delta_l >= 0 and sum <= 1");
    if (!(opt_.shrink > 0) || opt_.shrink > 1.0)
      throw std::invalid_argument("NoisyBounds: shrink must be in (0, 1]");
  }

  int num_elements() const override { return oracle_->num_elements(); }

  double upper(const Subset& a) override {
    const State& st = state_for(a);
    return st.estimate + st.width * (1.0 - 2.0 * opt_.delta_u);
  }

  double lower(const Subset& a) override {
    const State& st = state_for(a);
    return st.estimate - st.width * (1.0 - 2.0 * opt_.delta_l);
  }

  void tighten(const Subset& a) override {
    State& st = state_for(a);
    st.width *= opt_.shrink;
    redraw(st);
  }

 private:
  struct State {
    double f = 0.0;
    double width = 0.0;
    double estimate = 0.0;
    Rng rng;
  };

  void redraw(State& st) {
    double u = 2.0 * uniform_double(st.rng) - 1.0;
    st.estimate = st.f + st.width * u;
    ++work_;
  }

  State& state_for(const Subset& a) {
    std::vector<int> key = a.sorted_ids();
    auto it = states_.find(key);
    if (it == states_.end()) {
      std::uint64_t h = 0x9b4d2c;
      for (int id : key) h = mix64(h ^ static_cast<std::uint64_t>(id + 1));
      State st;
      st.f = oracle_->evaluate(a);
      st.width = opt_.width0;
      st.rng.seed(derive_seed(opt_.seed, h));
      redraw(st);
      it = states_.emplace(std::move(key), std::move(st)).first;
    }
    return it->second;
  }

  ExactOracle* oracle_;
  Options opt_;
  std::map<std::vector<int>, State> states_;
};

}  // namespace submax
