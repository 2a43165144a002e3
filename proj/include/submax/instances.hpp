#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "submax/belief.hpp"
#include "submax/random.hpp"
#include "submax/sensor_model.hpp"
#include "submax/set_functions.hpp"

namespace submax {

// Random coverage instance: each of `n_sets` sets includes each universe item
// independently with probability `density`.
inline CoverageOracle random_coverage_instance(Rng& rng, int n_sets, int universe,
                                               double density) {
  if (n_sets < 1 || universe < 1)
    throw std::invalid_argument("random_coverage_instance: need n_sets, universe >= 1");
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(n_sets));
  for (auto& set : sets)
    for (int item = 0; item < universe; ++item)
      if (uniform_double(rng) < density) set.push_back(item);
  return CoverageOracle(universe, std::move(sets));
}

// Random belief with full support: normalized positive draws.
inline Belief random_belief(Rng& rng, int num_states) {
  if (num_states < 1) throw std::invalid_argument("random_belief: num_states must be >= 1");
  std::vector<double> p(static_cast<std::size_t>(num_states));
  double sum = 0.0;
  for (double& v : p) {
    v = 0.05 + uniform_double(rng);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return Belief(std::move(p));
}

// Random belief whose first `support` states carry all the mass.
inline Belief random_belief_with_support(Rng& rng, int num_states, int support) {
  if (support < 1 || support > num_states)
    throw std::invalid_argument("random_belief_with_support: need 1 <= support <= num_states");
  std::vector<double> p(static_cast<std::size_t>(num_states), 0.0);
  double sum = 0.0;
  for (int s = 0; s < support; ++s) {
    p[static_cast<std::size_t>(s)] = 0.05 + uniform_double(rng);
    sum += p[static_cast<std::size_t>(s)];
  }
  for (int s = 0; s < support; ++s) p[static_cast<std::size_t>(s)] /= sum;
  return Belief(std::move(p));
}

// Random conditionally-independent sensor world: Dirichlet(1) rows, so every
// observation keeps positive probability under every state.
inline SensorModel random_sensor_world(Rng& rng, int num_sensors, int num_states,
                                       int alphabet) {
  if (num_sensors < 1 || num_states < 1 || alphabet < 1)
    throw std::invalid_argument("random_sensor_world: all dimensions must be >= 1");
  std::vector<int> alphabets(static_cast<std::size_t>(num_sensors), alphabet);
  std::vector<std::vector<double>> tables;
  tables.reserve(static_cast<std::size_t>(num_sensors));
  for (int i = 0; i < num_sensors; ++i) {
    std::vector<double> table(static_cast<std::size_t>(num_states) * alphabet);
    for (int s = 0; s < num_states; ++s) {
      double sum = 0.0;
      for (int v = 0; v < alphabet; ++v) {
        double g = -std::log(1.0 - uniform_double(rng));  // Exp(1)
        table[static_cast<std::size_t>(s) * alphabet + v] = g;
        sum += g;
      }
      for (int v = 0; v < alphabet; ++v)
        table[static_cast<std::size_t>(s) * alphabet + v] /= sum;
    }
    tables.push_back(std::move(table));
  }
  return SensorModel(num_states, std::move(alphabets), std::move(tables));
}

// Random surjective coarsening: each sensor gets between 1 and
// min(max_d, alphabet) clusters, every cluster non-empty.
inline CoarseningMap random_coarsening(Rng& rng, const SensorModel& model, int max_d) {
  if (max_d < 1) throw std::invalid_argument("random_coarsening: max_d must be >= 1");
  std::vector<std::vector<int>> maps;
  maps.reserve(static_cast<std::size_t>(model.num_sensors()));
  for (int i = 0; i < model.num_sensors(); ++i) {
    int alpha = model.alphabet(i);
    int d = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(
                                                        std::min(max_d, alpha))));
    std::vector<int> values(static_cast<std::size_t>(alpha));
    for (int v = 0; v < alpha; ++v) values[static_cast<std::size_t>(v)] = v;
    values = sample_without_replacement(rng, std::move(values), values.size());  // shuffle
    std::vector<int> m(static_cast<std::size_t>(alpha));
    for (int pos = 0; pos < alpha; ++pos) {
      int cluster = pos < d ? pos : static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(d)));
      m[static_cast<std::size_t>(values[static_cast<std::size_t>(pos)])] = cluster;
    }
    maps.push_back(std::move(m));
  }
  return CoarseningMap(std::move(maps));
}

// Binary "in coverage" sensor world over an abstract state space: sensor i
// fires on states in `regions[i]`, with its report flipped with probability
// `flip`. The regions may overlap or be empty.
inline SensorModel flip_noise_world(int num_states, const std::vector<std::vector<int>>& regions,
                                    double flip) {
  if (flip < 0.0 || flip > 1.0)
    throw std::invalid_argument("flip_noise_world: flip must be in [0, 1]");
  std::vector<int> alphabets(regions.size(), 2);
  std::vector<std::vector<double>> tables;
  tables.reserve(regions.size());
  for (const auto& region : regions) {
    std::vector<char> inside(static_cast<std::size_t>(num_states), 0);
    for (int s : region) {
      if (s < 0 || s >= num_states)
        throw std::out_of_range("flip_noise_world: region state outside state space");
      inside[static_cast<std::size_t>(s)] = 1;
    }
    std::vector<double> table(static_cast<std::size_t>(num_states) * 2);
    for (int s = 0; s < num_states; ++s) {
      double p_fire = inside[static_cast<std::size_t>(s)] ? 1.0 - flip : flip;
      table[static_cast<std::size_t>(s) * 2 + 0] = 1.0 - p_fire;
      table[static_cast<std::size_t>(s) * 2 + 1] = p_fire;
    }
    tables.push_back(std::move(table));
  }
  return SensorModel(num_states, std::move(alphabets), std::move(tables));
}

// One sensor that reports the state exactly.
inline SensorModel perfect_sensor_world(int num_states) {
  std::vector<double> table(static_cast<std::size_t>(num_states) * num_states, 0.0);
  for (int s = 0; s < num_states; ++s)
    table[static_cast<std::size_t>(s) * num_states + s] = 1.0;
  return SensorModel(num_states, {num_states}, {std::move(table)});
}

}  // namespace submax
