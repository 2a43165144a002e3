#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "submax/ground_set.hpp"
#include "submax/oracle.hpp"
#include "submax/random.hpp"

namespace submax {

// Per-pass bookkeeping inside one pac-max call.
struct PacPassLog {
  std::size_t queue_size = 0;  // live candidates at pass start
  std::size_t pruned = 0;
  std::size_t tightened = 0;
  double max_change = 0.0;  // largest single-element |ΔU| or |ΔL| this pass
  int leader = -1;          // max-lower-bound element at pass end
  bool leader_requeued = false;
};

// One outer iteration of a maximizer (one element picked).
struct IterationLog {
  int chosen = -1;
  double value = 0.0;            // marginal gain, or the pick's lower bound (pac)
  std::size_t candidates = 0;    // queue size at iteration start
  std::size_t gain_evals = 0;    // marginal-gain computations (exact maximizers)
  std::size_t pruned = 0;        // pac: total prunes across passes
  std::size_t tighten_calls = 0; // pac: tighten calls this iteration
  std::size_t passes = 0;        // pac: full passes over the queue
  bool converged = true;         // pac: false when the round cap was hit
  std::vector<PacPassLog> pass_logs;
};

struct SelectionResult {
  Subset chosen;
  std::vector<IterationLog> iterations;
  std::uint64_t gain_evals = 0;
  std::uint64_t tighten_calls = 0;
  // F(chosen) when the maximizer evaluated it on the way; NaN otherwise (pac).
  double objective = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline std::size_t selection_steps(const GroundSet& x, int k) {
  if (k < 0) throw std::invalid_argument("maximizer: k must be >= 0");
  return static_cast<std::size_t>(std::min(k, x.n));
}

inline void check_oracle_matches(const ExactOracle& oracle, const GroundSet& x) {
  if (oracle.num_elements() != x.n)
    throw std::invalid_argument("maximizer: oracle ground set (" +
                                std::to_string(oracle.num_elements()) +
                                ") does not match X (" + std::to_string(x.n) + ")");
}

}  // namespace detail

// Plain greedy: k rounds of argmax marginal gain, ties to the lowest id.
// F(A) is evaluated once up front and carried forward as gains accumulate.
inline SelectionResult greedy_max(ExactOracle& oracle, const GroundSet& x, int k) {
  detail::check_oracle_matches(oracle, x);
  const std::size_t steps = detail::selection_steps(x, k);

  SelectionResult result;
  result.chosen = Subset(steps);
  double current = 0.0;
  for (std::size_t it = 0; it < steps; ++it) {
    if (it == 0) current = oracle.evaluate(result.chosen);
    IterationLog log;
    log.candidates = static_cast<std::size_t>(x.n) - result.chosen.size();
    int best_id = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < x.n; ++i) {
      if (result.chosen.contains(i)) continue;
      double gain = oracle.evaluate(result.chosen.with(i)) - current;
      ++log.gain_evals;
      if (gain > best_gain) {
        best_gain = gain;
        best_id = i;
      }
    }
    result.chosen.add(best_id);
    current += best_gain;
    log.chosen = best_id;
    log.value = best_gain;
    result.gain_evals += log.gain_evals;
    result.iterations.push_back(std::move(log));
  }
  if (steps > 0) result.objective = current;
  return result;
}

// Lazy greedy: priority queue of stale marginal gains (upper bounds under
// submodularity). Popping until the top entry is fresh reproduces greedy's
// picks and tie-breaking exactly while skipping re-evaluations that cannot
// win.
inline SelectionResult lazy_greedy_max(ExactOracle& oracle, const GroundSet& x, int k) {
  detail::check_oracle_matches(oracle, x);
  const std::size_t steps = detail::selection_steps(x, k);

  struct Entry {
    double gain;
    int id;
    std::size_t fresh_iter;
  };
  struct Order {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.gain != b.gain) return a.gain < b.gain;  // max-heap on gain
      return a.id > b.id;                            // then lowest id first
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Order> queue;

  SelectionResult result;
  result.chosen = Subset(steps);
  double current = 0.0;
  for (std::size_t it = 0; it < steps; ++it) {
    IterationLog log;
    log.candidates = static_cast<std::size_t>(x.n) - result.chosen.size();
    if (it == 0) {
      current = oracle.evaluate(result.chosen);
      for (int i = 0; i < x.n; ++i) {
        queue.push({oracle.evaluate(result.chosen.with(i)) - current, i, 0});
        ++log.gain_evals;
      }
    }
    while (true) {
      Entry top = queue.top();
      queue.pop();
      if (top.fresh_iter == it) {
        result.chosen.add(top.id);
        current += top.gain;
        log.chosen = top.id;
        log.value = top.gain;
        break;
      }
      top.gain = oracle.evaluate(result.chosen.with(top.id)) - current;
      ++log.gain_evals;
      top.fresh_iter = it;
      queue.push(top);
    }
    result.gain_evals += log.gain_evals;
    result.iterations.push_back(std::move(log));
  }
  if (steps > 0) result.objective = current;
  return result;
}

// Lazier greedy: each round draws R candidates uniformly without replacement
// from the remaining elements (all of them when fewer than R remain) and adds
// the best of the sample. Deterministic given the seed; R = n degenerates to
// plain greedy.
inline SelectionResult lazier_greedy_max(ExactOracle& oracle, const GroundSet& x,
                                         int k, int r, std::uint64_t seed) {
  detail::check_oracle_matches(oracle, x);
  if (r < 1 || r > x.n)
    throw std::invalid_argument("lazier_greedy_max: R must satisfy 1 <= R <= n");
  const std::size_t steps = detail::selection_steps(x, k);

  Rng rng(derive_seed(seed, 0x1a21e5));
  SelectionResult result;
  result.chosen = Subset(steps);
  double current = 0.0;
  for (std::size_t it = 0; it < steps; ++it) {
    if (it == 0) current = oracle.evaluate(result.chosen);
    IterationLog log;
    log.candidates = static_cast<std::size_t>(x.n) - result.chosen.size();

    std::vector<int> remaining;
    remaining.reserve(log.candidates);
    for (int i = 0; i < x.n; ++i)
      if (!result.chosen.contains(i)) remaining.push_back(i);
    std::vector<int> sample =
        sample_without_replacement(rng, std::move(remaining), static_cast<std::size_t>(r));
    std::sort(sample.begin(), sample.end());  // tie-break by lowest id

    int best_id = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int i : sample) {
      double gain = oracle.evaluate(result.chosen.with(i)) - current;
      ++log.gain_evals;
      if (gain > best_gain) {
        best_gain = gain;
        best_id = i;
      }
    }
    result.chosen.add(best_id);
    current += best_gain;
    log.chosen = best_id;
    log.value = best_gain;
    result.gain_evals += log.gain_evals;
    result.iterations.push_back(std::move(log));
  }
  if (steps > 0) result.objective = current;
  return result;
}

// Exhaustive maximization over all subsets of size <= k, in (size, lex) order
// with strict improvement, so ties resolve to the first subset in that order.
// Refuses instances whose enumeration would exceed `cap` subsets.
inline std::pair<Subset, double> brute_force_max(ExactOracle& oracle, const GroundSet& x,
                                                 int k, std::uint64_t cap = 1'000'000) {
  detail::check_oracle_matches(oracle, x);
  if (k < 0) throw std::invalid_argument("brute_force_max: k must be >= 0");
  const int kk = std::min(k, x.n);

  // Total subsets of size <= k, saturating against the cap.
  std::uint64_t total = 0;
  {
    long double binom = 1.0L;  // C(n, 0)
    for (int j = 0; j <= kk; ++j) {
      if (j > 0) binom = binom * static_cast<long double>(x.n - j + 1) / j;
      if (binom > static_cast<long double>(cap) ||
          (total += static_cast<std::uint64_t>(binom)) > cap)
        throw std::runtime_error(
            "brute_force_max: enumeration of subsets up to size " + std::to_string(kk) +
            " over n=" + std::to_string(x.n) + " exceeds cap " + std::to_string(cap));
    }
  }

  Subset best;
  double best_value = oracle.evaluate(best);
  std::vector<int> combo;
  for (int size = 1; size <= kk; ++size) {
    combo.assign(static_cast<std::size_t>(size), 0);
    for (int j = 0; j < size; ++j) combo[j] = j;
    while (true) {
      Subset a;
      for (int id : combo) a.add(id);
      double v = oracle.evaluate(a);
      if (v > best_value) {
        best_value = v;
        best = a;
      }
      // next lexicographic combination
      int pos = size - 1;
      while (pos >= 0 && combo[pos] == x.n - size + pos) --pos;
      if (pos < 0) break;
      ++combo[pos];
      for (int j = pos + 1; j < size; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return {best, best_value};
}

}  // namespace submax
