#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace submax {

// Normalized discrete distribution over states 0..|S|-1.
class Belief {
 public:
  explicit Belief(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw std::invalid_argument("Belief: empty state space");
    double sum = 0.0;
    int support = 0;
    for (double v : p_) {
      if (v < 0.0) throw std::invalid_argument("Belief: negative probability");
      if (v > 0.0) ++support;
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("Belief: probabilities sum to " + std::to_string(sum));
    if (support < 1) throw std::invalid_argument("Belief: empty support");
  }

  static Belief uniform(int num_states) {
    if (num_states < 1) throw std::invalid_argument("Belief: num_states must be >= 1");
    return Belief(std::vector<double>(num_states, 1.0 / num_states));
  }

  static Belief point_mass(int num_states, int state) {
    if (state < 0 || state >= num_states)
      throw std::out_of_range("Belief: point mass outside state space");
    std::vector<double> p(num_states, 0.0);
    p[state] = 1.0;
    return Belief(std::move(p));
  }

  int num_states() const { return static_cast<int>(p_.size()); }
  double operator[](int s) const { return p_[static_cast<std::size_t>(s)]; }
  std::span<const double> probs() const { return p_; }

  // Count of strictly positive entries.
  int support() const {
    int count = 0;
    for (double v : p_)
      if (v > 0.0) ++count;
    return count;
  }

 private:
  std::vector<double> p_;
};

// M state draws from some belief.
struct SampleSet {
  std::vector<int> states;

  int count() const { return static_cast<int>(states.size()); }
};

// Entropy (nats) of a count histogram, with 0·log 0 = 0.
inline double entropy_of_counts(std::span<const int> counts, int total) {
  if (total < 1) throw std::invalid_argument("entropy_of_counts: empty histogram");
  double h = 0.0;
  const double inv = 1.0 / total;
  for (int c : counts) {
    if (c <= 0 || c == total) continue;  // a point mass contributes exactly zero
    double p = c * inv;
    h -= p * std::log(p);
  }
  return h;
}

// Maximum likelihood estimate of the generating belief: counts / M.
inline Belief mle_belief(const SampleSet& samples, int num_states) {
  if (samples.count() < 1) throw std::invalid_argument("mle_belief: need M >= 1 samples");
  if (num_states < 1) throw std::invalid_argument("mle_belief: num_states must be >= 1");
  std::vector<double> p(static_cast<std::size_t>(num_states), 0.0);
  const double inc = 1.0 / samples.count();
  for (int s : samples.states) {
    if (s < 0 || s >= num_states)
      throw std::out_of_range("mle_belief: state id " + std::to_string(s) +
                              " outside 0.." + std::to_string(num_states - 1));
    p[static_cast<std::size_t>(s)] += inc;
  }
  return Belief(std::move(p));
}

inline double exact_entropy(const Belief& b) {
  double h = 0.0;
  for (double p : b.probs()) {
    if (p <= 0.0) continue;
    h -= p * std::log(p);
  }
  return h;
}

// Plug-in (MLE) entropy of M samples; negatively biased for |support| > 1.
inline double plugin_entropy(const SampleSet& samples, int num_states) {
  if (samples.count() < 1) throw std::invalid_argument("plugin_entropy: need M >= 1 samples");
  std::vector<int> counts(static_cast<std::size_t>(num_states), 0);
  for (int s : samples.states) {
    if (s < 0 || s >= num_states)
      throw std::out_of_range("plugin_entropy: state id outside state space");
    ++counts[static_cast<std::size_t>(s)];
  }
  return entropy_of_counts(counts, samples.count());
}

}  // namespace submax
