#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "submax/ground_set.hpp"
#include "submax/oracle.hpp"
#include "submax/random.hpp"

namespace submax {

// Hoeffding bounds for mean-type objectives F(A) = E[X | A] with X in
// [lo, hi]: per subset, U/L = running mean ± (hi-lo)·sqrt(ln(2/δ)/(2N)), and
// tighten folds a batch of fresh samples in. Before the first sample the
// interval is (-inf, +inf). work() counts samples drawn.
class HoeffdingProvider final : public BoundProvider {
 public:
  using Sampler = std::function<double(const Subset&, Rng&)>;

  HoeffdingProvider(int num_elements, Sampler sampler, double lo, double hi,
                    double delta, int batch = 32, std::uint64_t seed = 0)
      : n_(num_elements),
        sampler_(std::move(sampler)),
        lo_(lo),
        hi_(hi),
        delta_(delta),
        batch_(batch),
        seed_(seed) {
    if (n_ < 1) throw std::invalid_argument("HoeffdingProvider: empty ground set");
    if (!(hi_ > lo_)) throw std::invalid_argument("HoeffdingProvider: need hi > lo");
    if (!(delta_ > 0.0) || !(delta_ < 1.0))
      throw std::invalid_argument("HoeffdingProvider: delta must be in (0, 1)");
    if (batch_ < 1) throw std::invalid_argument("HoeffdingProvider: batch must be >= 1");
  }

  int num_elements() const override { return n_; }

  double upper(const Subset& a) override {
    const State& st = state_for(a);
    if (st.n == 0) return std::numeric_limits<double>::infinity();
    return st.sum / st.n + radius(st.n);
  }

  double lower(const Subset& a) override {
    const State& st = state_for(a);
    if (st.n == 0) return -std::numeric_limits<double>::infinity();
    return st.sum / st.n - radius(st.n);
  }

  void tighten(const Subset& a) override {
    State& st = state_for(a);
    for (int i = 0; i < batch_; ++i) {
      double x = sampler_(a, st.rng);
      if (x < lo_ || x > hi_)
        throw contract_violation("HoeffdingProvider: sample " + std::to_string(x) +
                                 " outside [" + std::to_string(lo_) + ", " +
                                 std::to_string(hi_) + "]");
      st.sum += x;
      ++st.n;
      ++work_;
    }
  }

  std::uint64_t samples(const Subset& a) const {
    auto it = states_.find(a.sorted_ids());
    return it == states_.end() ? 0 : it->second.n;
  }

  double radius(std::uint64_t n) const {
    return (hi_ - lo_) * std::sqrt(std::log(2.0 / delta_) / (2.0 * static_cast<double>(n)));
  }

 private:
  struct State {
    double sum = 0.0;
    std::uint64_t n = 0;
    Rng rng;
  };

  State& state_for(const Subset& a) {
    std::vector<int> key = a.sorted_ids();
    auto it = states_.find(key);
    if (it == states_.end()) {
      std::uint64_t h = 0x5c5e1f;
      for (int id : key) h = mix64(h ^ static_cast<std::uint64_t>(id + 1));
      State st;
      st.rng.seed(derive_seed(seed_, h));
      it = states_.emplace(std::move(key), std::move(st)).first;
    }
    return it->second;
  }

  int n_;
  Sampler sampler_;
  double lo_, hi_, delta_;
  int batch_;
  std::uint64_t seed_;
  std::map<std::vector<int>, State> states_;
};

inline HoeffdingProvider hoeffding_provider(int num_elements, HoeffdingProvider::Sampler sampler,
                                            double lo, double hi, double delta,
                                            int batch = 32, std::uint64_t seed = 0) {
  return HoeffdingProvider(num_elements, std::move(sampler), lo, hi, delta, batch, seed);
}

}  // namespace submax
