#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "submax/belief.hpp"
#include "submax/ground_set.hpp"
#include "submax/oracle.hpp"
#include "submax/random.hpp"

namespace submax {

// Joint observation over all sensors; sensors outside the selected subset
// report the null observation.
struct JointObservation {
  static constexpr int kNull = -1;

  std::vector<int> values;

  static JointObservation null_for(int num_sensors) {
    return {std::vector<int>(static_cast<std::size_t>(num_sensors), kNull)};
  }
};

// Finite per-sensor observation tables Pr(z_i = v | s), conditionally
// independent across sensors given the state. Immutable after construction.
class SensorModel {
 public:
  // tables[i] is state-major: Pr(z_i = v | s) = tables[i][s * alphabet_i + v].
  SensorModel(int num_states, std::vector<int> alphabet_sizes,
              std::vector<std::vector<double>> tables)
      : num_states_(num_states),
        alphabet_(std::move(alphabet_sizes)),
        tables_(std::move(tables)) {
    if (num_states_ < 1) throw std::invalid_argument("SensorModel: num_states must be >= 1");
    if (alphabet_.size() != tables_.size())
      throw std::invalid_argument("SensorModel: alphabet/table count mismatch");
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      int alpha = alphabet_[i];
      if (alpha < 1) throw std::invalid_argument("SensorModel: alphabet size must be >= 1");
      if (tables_[i].size() != static_cast<std::size_t>(num_states_) * alpha)
        throw std::invalid_argument("SensorModel: table size mismatch for sensor " +
                                    std::to_string(i));
      for (int s = 0; s < num_states_; ++s) {
        double row_sum = 0.0;
        for (int v = 0; v < alpha; ++v) {
          double p = tables_[i][static_cast<std::size_t>(s) * alpha + v];
          if (p < 0.0)
            throw std::invalid_argument("SensorModel: negative probability in sensor " +
                                        std::to_string(i));
          row_sum += p;
        }
        if (std::fabs(row_sum - 1.0) > 1e-9)
          throw std::invalid_argument("SensorModel: sensor " + std::to_string(i) +
                                      " state " + std::to_string(s) + " row sums to " +
                                      std::to_string(row_sum));
      }
    }
  }

  int num_states() const { return num_states_; }
  int num_sensors() const { return static_cast<int>(tables_.size()); }
  int alphabet(int sensor) const { return alphabet_[static_cast<std::size_t>(sensor)]; }

  int max_alphabet() const {
    int m = 1;
    for (int a : alphabet_) m = std::max(m, a);
    return m;
  }

  double prob(int sensor, int value, int state) const {
    return tables_[static_cast<std::size_t>(sensor)]
                  [static_cast<std::size_t>(state) * alphabet_[sensor] + value];
  }

  // Pr(z_A | s): product over the selected sensors.
  double joint_given_state(const Subset& a, const JointObservation& z, int s) const {
    double p = 1.0;
    for (int i : a.ids()) p *= prob(i, z.values[static_cast<std::size_t>(i)], s);
    return p;
  }

  int sample_value(int sensor, int state, Rng& rng) const {
    double u = uniform_double(rng);
    const int alpha = alphabet_[static_cast<std::size_t>(sensor)];
    const double* row =
        tables_[static_cast<std::size_t>(sensor)].data() + static_cast<std::size_t>(state) * alpha;
    double acc = 0.0;
    for (int v = 0; v < alpha - 1; ++v) {
      acc += row[v];
      if (u < acc) return v;
    }
    return alpha - 1;
  }

  // |Ω| for the sensors in A, saturating at uint64 max.
  std::uint64_t joint_space_size(const Subset& a) const {
    std::uint64_t size = 1;
    for (int i : a.ids()) {
      std::uint64_t alpha = static_cast<std::uint64_t>(alphabet_[static_cast<std::size_t>(i)]);
      if (size > std::numeric_limits<std::uint64_t>::max() / alpha)
        return std::numeric_limits<std::uint64_t>::max();
      size *= alpha;
    }
    return size;
  }

  void validate_observation(const Subset& a, const JointObservation& z) const {
    if (z.values.size() != static_cast<std::size_t>(num_sensors()))
      throw std::invalid_argument("observation: expected one slot per sensor");
    std::vector<char> selected(static_cast<std::size_t>(num_sensors()), 0);
    for (int i : a.ids()) {
      if (i < 0 || i >= num_sensors())
        throw std::out_of_range("observation: sensor id outside model");
      selected[static_cast<std::size_t>(i)] = 1;
    }
    for (int i = 0; i < num_sensors(); ++i) {
      int v = z.values[static_cast<std::size_t>(i)];
      if (selected[static_cast<std::size_t>(i)]) {
        if (v < 0 || v >= alphabet_[static_cast<std::size_t>(i)])
          throw std::invalid_argument("observation: sensor " + std::to_string(i) +
                                      " value " + std::to_string(v) + " outside alphabet");
      } else if (v != JointObservation::kNull) {
        throw std::invalid_argument("observation: unselected sensor " + std::to_string(i) +
                                    " must carry the null observation");
      }
    }
  }

  // Structured-text ingestion. Format:
  //   num_states N
  //   num_sensors n
  //   sensor <id> <alphabet>
  //   ... N rows of <alphabet> probabilities (state-major) ...
  // '#' starts a comment; sensors must appear in id order; every row must sum
  // to 1 within 1e-9.
  static SensorModel load(std::istream& in) {
    auto next_token = [&in]() -> std::string {
      std::string tok;
      while (in >> tok) {
        if (!tok.empty() && tok[0] == '#') {
          std::string rest;
          std::getline(in, rest);
          continue;
        }
        return tok;
      }
      return {};
    };
    auto expect_keyword = [&](const std::string& kw) {
      std::string tok = next_token();
      if (tok != kw)
        throw std::runtime_error("sensor model: expected '" + kw + "', got '" + tok + "'");
    };
    auto read_int = [&](const std::string& what) {
      std::string tok = next_token();
      if (tok.empty()) throw std::runtime_error("sensor model: missing " + what);
      try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
      } catch (const std::exception&) {
        throw std::runtime_error("sensor model: bad integer for " + what + ": '" + tok + "'");
      }
    };
    auto read_prob = [&](int sensor, int state) {
      std::string tok = next_token();
      if (tok.empty())
        throw std::runtime_error("sensor model: truncated table for sensor " +
                                 std::to_string(sensor) + ", state " + std::to_string(state));
      try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
      } catch (const std::exception&) {
        throw std::runtime_error("sensor model: bad probability '" + tok + "'");
      }
    };

    expect_keyword("num_states");
    int num_states = read_int("num_states");
    expect_keyword("num_sensors");
    int num_sensors = read_int("num_sensors");
    if (num_sensors < 0) throw std::runtime_error("sensor model: negative num_sensors");

    std::vector<int> alphabet;
    std::vector<std::vector<double>> tables;
    for (int i = 0; i < num_sensors; ++i) {
      expect_keyword("sensor");
      int id = read_int("sensor id");
      if (id != i)
        throw std::runtime_error("sensor model: expected sensor " + std::to_string(i) +
                                 ", got " + std::to_string(id));
      int alpha = read_int("alphabet size");
      if (alpha < 1) throw std::runtime_error("sensor model: alphabet size must be >= 1");
      std::vector<double> table(static_cast<std::size_t>(num_states) * alpha);
      for (int s = 0; s < num_states; ++s)
        for (int v = 0; v < alpha; ++v)
          table[static_cast<std::size_t>(s) * alpha + v] = read_prob(i, s);
      alphabet.push_back(alpha);
      tables.push_back(std::move(table));
    }
    if (!next_token().empty())
      throw std::runtime_error("sensor model: trailing content after last sensor table");
    try {
      return SensorModel(num_states, std::move(alphabet), std::move(tables));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("sensor model: ") + e.what());
    }
  }

  static SensorModel load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("sensor model: cannot open '" + path + "'");
    return load(in);
  }

  void save(std::ostream& out) const {
    out << "num_states " << num_states_ << "\n";
    out << "num_sensors " << num_sensors() << "\n";
    char buf[64];
    for (int i = 0; i < num_sensors(); ++i) {
      out << "sensor " << i << " " << alphabet_[static_cast<std::size_t>(i)] << "\n";
      for (int s = 0; s < num_states_; ++s) {
        for (int v = 0; v < alphabet_[static_cast<std::size_t>(i)]; ++v) {
          std::snprintf(buf, sizeof buf, "%.17g", prob(i, v, s));
          out << (v ? " " : "") << buf;
        }
        out << "\n";
      }
    }
  }

 private:
  int num_states_;
  std::vector<int> alphabet_;
  std::vector<std::vector<double>> tables_;
};

// Pr(z | b, A) = Σ_s b(s) · Π_{i∈A} Pr(z_i | s).
inline double observation_likelihood(const SensorModel& model, const Belief& b,
                                     const Subset& a, const JointObservation& z) {
  if (b.num_states() != model.num_states())
    throw std::invalid_argument("observation_likelihood: belief/model state mismatch");
  model.validate_observation(a, z);
  double total = 0.0;
  for (int s = 0; s < model.num_states(); ++s)
    total += b[s] * model.joint_given_state(a, z, s);
  return total;
}

// Bayes posterior b_z^A; rejects observations with zero likelihood.
inline Belief posterior_belief(const SensorModel& model, const Belief& b,
                               const Subset& a, const JointObservation& z) {
  if (b.num_states() != model.num_states())
    throw std::invalid_argument("posterior_belief: belief/model state mismatch");
  model.validate_observation(a, z);
  std::vector<double> post(static_cast<std::size_t>(model.num_states()), 0.0);
  double norm = 0.0;
  for (int s = 0; s < model.num_states(); ++s) {
    post[static_cast<std::size_t>(s)] = b[s] * model.joint_given_state(a, z, s);
    norm += post[static_cast<std::size_t>(s)];
  }
  if (norm <= 0.0)
    throw std::domain_error("posterior_belief: observation has zero likelihood");
  for (double& p : post) p /= norm;
  return Belief(std::move(post));
}

namespace detail {

// Walks every joint observation over A (odometer over the selected sensors'
// alphabets) and hands (per-state joint likelihood, z) to the visitor.
template <typename Visitor>
void for_each_joint_observation(const SensorModel& model, const Subset& a, Visitor&& visit) {
  const auto& ids = a.ids();
  std::vector<int> digits(ids.size(), 0);
  JointObservation z = JointObservation::null_for(model.num_sensors());
  while (true) {
    for (std::size_t j = 0; j < ids.size(); ++j)
      z.values[static_cast<std::size_t>(ids[j])] = digits[j];
    visit(const_cast<const JointObservation&>(z));
    std::size_t pos = 0;
    while (pos < digits.size()) {
      if (++digits[pos] < model.alphabet(ids[pos])) break;
      digits[pos] = 0;
      ++pos;
    }
    if (pos == digits.size()) break;
  }
}

}  // namespace detail

// Conditional entropy H_b^A(s|z) = Σ_z Pr(z|b,A) · H(b_z^A), in nats,
// enumerating the joint observation space. Zero-probability observations are
// skipped. Refuses when |Ω| exceeds `cap`.
inline double exact_conditional_entropy(const SensorModel& model, const Belief& b,
                                        const Subset& a, std::uint64_t cap = 1'000'000) {
  if (b.num_states() != model.num_states())
    throw std::invalid_argument("exact_conditional_entropy: belief/model state mismatch");
  std::uint64_t omega = model.joint_space_size(a);
  if (omega > cap)
    throw std::runtime_error("exact_conditional_entropy: |Omega| = " + std::to_string(omega) +
                             " exceeds enumeration cap " + std::to_string(cap));
  const int num_states = model.num_states();
  std::vector<double> weights(static_cast<std::size_t>(num_states));
  double result = 0.0;
  detail::for_each_joint_observation(model, a, [&](const JointObservation& z) {
    double pz = 0.0;
    for (int s = 0; s < num_states; ++s) {
      double w = b[s] * model.joint_given_state(a, z, s);
      weights[static_cast<std::size_t>(s)] = w;
      pz += w;
    }
    if (pz <= 0.0) return;
    double h = 0.0;
    for (int s = 0; s < num_states; ++s) {
      double p = weights[static_cast<std::size_t>(s)] / pz;
      if (p > 0.0) h -= p * std::log(p);
    }
    result += pz * h;
  });
  return result;
}

// IG_b(A) = H(b) - H_b^A(s|z); non-negative, zero for A = ∅.
inline double information_gain(const SensorModel& model, const Belief& b,
                               const Subset& a, std::uint64_t cap = 1'000'000) {
  return exact_entropy(b) - exact_conditional_entropy(model, b, a, cap);
}

// Selection objective F(A) = -H_b^A(s|z); same argmax as information gain.
inline double objective_F(const SensorModel& model, const Belief& b,
                          const Subset& a, std::uint64_t cap = 1'000'000) {
  return -exact_conditional_entropy(model, b, a, cap);
}

// Deterministic per-sensor clustering of observation values; the null
// observation maps to itself. Cluster ids are dense 0..d_i-1 per sensor.
class CoarseningMap {
 public:
  explicit CoarseningMap(std::vector<std::vector<int>> value_to_cluster)
      : map_(std::move(value_to_cluster)) {
    d_.reserve(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) {
      const auto& m = map_[i];
      if (m.empty()) throw std::invalid_argument("CoarseningMap: empty sensor map");
      int d = 0;
      for (int c : m) {
        if (c < 0) throw std::invalid_argument("CoarseningMap: negative cluster id");
        d = std::max(d, c + 1);
      }
      std::vector<char> seen(static_cast<std::size_t>(d), 0);
      for (int c : m) seen[static_cast<std::size_t>(c)] = 1;
      for (int c = 0; c < d; ++c)
        if (!seen[static_cast<std::size_t>(c)])
          throw std::invalid_argument("CoarseningMap: sensor " + std::to_string(i) +
                                      " leaves cluster " + std::to_string(c) + " empty");
      d_.push_back(d);
    }
  }

  // Contiguous equal-width grouping of value ids into at most d clusters per
  // sensor (fewer when the alphabet is smaller than d).
  static CoarseningMap contiguous(const SensorModel& model, int d) {
    if (d < 1) throw std::invalid_argument("CoarseningMap: d must be >= 1");
    std::vector<std::vector<int>> maps;
    maps.reserve(static_cast<std::size_t>(model.num_sensors()));
    for (int i = 0; i < model.num_sensors(); ++i) {
      int alpha = model.alphabet(i);
      int di = std::min(d, alpha);
      std::vector<int> m(static_cast<std::size_t>(alpha));
      for (int v = 0; v < alpha; ++v)
        m[static_cast<std::size_t>(v)] = static_cast<int>(
            (static_cast<long long>(v) * di) / alpha);
      maps.push_back(std::move(m));
    }
    return CoarseningMap(std::move(maps));
  }

  int num_sensors() const { return static_cast<int>(map_.size()); }
  int clusters(int sensor) const { return d_[static_cast<std::size_t>(sensor)]; }
  int cluster_of(int sensor, int value) const {
    return map_[static_cast<std::size_t>(sensor)][static_cast<std::size_t>(value)];
  }

 private:
  std::vector<std::vector<int>> map_;
  std::vector<int> d_;
};

// Marginalized coarse model: Pr(r_i = c | s) = Σ_{v : f_i(v) = c} Pr(z_i = v | s).
// Compute once per clustering and reuse across beliefs.
inline SensorModel coarse_model(const SensorModel& model, const CoarseningMap& map) {
  if (map.num_sensors() != model.num_sensors())
    throw std::invalid_argument("coarse_model: map/model sensor count mismatch");
  std::vector<int> alphabet;
  std::vector<std::vector<double>> tables;
  alphabet.reserve(static_cast<std::size_t>(model.num_sensors()));
  tables.reserve(static_cast<std::size_t>(model.num_sensors()));
  for (int i = 0; i < model.num_sensors(); ++i) {
    int d = map.clusters(i);
    std::vector<double> table(static_cast<std::size_t>(model.num_states()) * d, 0.0);
    for (int s = 0; s < model.num_states(); ++s)
      for (int v = 0; v < model.alphabet(i); ++v)
        table[static_cast<std::size_t>(s) * d + map.cluster_of(i, v)] += model.prob(i, v, s);
    alphabet.push_back(d);
    tables.push_back(std::move(table));
  }
  return SensorModel(model.num_states(), std::move(alphabet), std::move(tables));
}

// Exact information gain as a set-function oracle over sensors.
class InformationGainOracle final : public ExactOracle {
 public:
  InformationGainOracle(SensorModel model, Belief prior, std::uint64_t cap = 1'000'000)
      : model_(std::move(model)), prior_(std::move(prior)), cap_(cap) {
    if (prior_.num_states() != model_.num_states())
      throw std::invalid_argument("InformationGainOracle: belief/model state mismatch");
  }

  int num_elements() const override { return model_.num_sensors(); }
  const SensorModel& model() const { return model_; }
  const Belief& prior() const { return prior_; }

 protected:
  double value(const Subset& a) override {
    return information_gain(model_, prior_, a, cap_);
  }

 private:
  SensorModel model_;
  Belief prior_;
  std::uint64_t cap_;
};

}  // namespace submax
