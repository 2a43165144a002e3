#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace submax {

// Components of a concentration-plus-bias bound on plug-in entropy.
struct EntropyBound {
  double eta = 0.0;       // concentration radius
  double delta_eta = 1.0; // probability the radius is exceeded
  double mu_floor = 0.0;  // bias floor (<= 0)
};

// Probability that the plug-in entropy of M samples deviates from its mean by
// at least eta: min(1, 2·exp(-(M/2)·η²·(ln M)⁻²)). Natural logs throughout.
inline double paninski_delta(int m, double eta) {
  if (m < 2) throw std::invalid_argument("paninski_delta: M must be >= 2");
  if (!(eta > 0)) throw std::invalid_argument("paninski_delta: eta must be > 0");
  const double log_m = std::log(static_cast<double>(m));
  const double raw = 2.0 * std::exp(-(m / 2.0) * eta * eta / (log_m * log_m));
  return std::min(1.0, raw);
}

// Radius whose deviation probability is delta: η = ln(M)·sqrt((2/M)·ln(2/δ)).
// Inverse of paninski_delta on the unclipped branch.
inline double paninski_eta(int m, double delta) {
  if (m < 2) throw std::invalid_argument("paninski_eta: M must be >= 2");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("paninski_eta: delta must be in (0, 1)");
  return std::log(static_cast<double>(m)) *
         std::sqrt((2.0 / m) * std::log(2.0 / delta));
}

// Lower bound on the (always non-positive) bias of plug-in entropy:
// μ_M = -ln(1 + (support - 1)/M).
inline double bias_floor(int m, int support) {
  if (m < 1) throw std::invalid_argument("bias_floor: M must be >= 1");
  if (support < 1) throw std::invalid_argument("bias_floor: support must be >= 1");
  return -std::log(1.0 + static_cast<double>(support - 1) / m);
}

inline EntropyBound entropy_bound_for(int m, double delta, int support) {
  return {paninski_eta(m, delta), delta, bias_floor(m, support)};
}

}  // namespace submax
