#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "submax/ground_set.hpp"
#include "submax/maximizers.hpp"
#include "submax/oracle.hpp"

namespace submax {

struct PacParams {
  double epsilon1 = 0.0;       // per-iteration slack
  double t = 1e-3;             // stop once per-pass bound movement falls below this
  int max_tighten_rounds = 64; // hard cap on passes, for providers that stall

  void validate() const {
    if (epsilon1 < 0) throw std::invalid_argument("PacParams: epsilon1 must be >= 0");
    if (!(t > 0)) throw std::invalid_argument("PacParams: t must be > 0");
    if (max_tighten_rounds < 1)
      throw std::invalid_argument("PacParams: max_tighten_rounds must be >= 1");
  }
};

struct PacMaxResult {
  int chosen = -1;
  double chosen_lower = 0.0;  // L(A ∪ chosen) at exit
  bool converged = true;      // false when the pass cap was hit with survivors
  std::size_t passes = 0;
  std::size_t pruned = 0;
  std::size_t tighten_calls = 0;
  std::vector<PacPassLog> pass_logs;
};

// One PAC selection step over X \ A.
//
// Candidates live in a queue ordered by U(A ∪ i) descending. Each pass keeps
// the current max-lower-bound element i^P unconditionally, keeps any other i
// with U(A ∪ i) >= L(A ∪ i^P) + ε₁, and prunes the rest; every survivor is
// tightened and its bounds re-read. The loop ends when a single candidate
// remains, when the largest single-element bound change in a full pass drops
// below t, or when the pass cap is hit (flagged unconverged). Returns i^P.
//
// Cached bounds are refreshed only by tightening that same subset; other
// candidates keep their cached values within a pass.
inline PacMaxResult pac_max(BoundProvider& bounds, const Subset& a, const PacParams& params) {
  params.validate();

  struct Cand {
    int id;
    double u;
    double l;
  };
  std::vector<Cand> live;
  for (int i = 0; i < bounds.num_elements(); ++i)
    if (!a.contains(i)) live.push_back({i, 0.0, 0.0});
  if (live.empty()) throw std::invalid_argument("pac_max: no candidates outside A");

  int leader = -1;
  double leader_l = -std::numeric_limits<double>::infinity();
  auto offer_leader = [&](int id, double l) {
    if (leader < 0 || l > leader_l || (l == leader_l && id < leader)) {
      leader = id;
      leader_l = l;
    }
  };

  for (Cand& c : live) {
    Subset probe = a.with(c.id);
    c.u = bounds.upper(probe);
    c.l = bounds.lower(probe);
    if (c.u < c.l)
      throw contract_violation("pac_max: provider returned U < L for " + to_string(probe));
    offer_leader(c.id, c.l);
  }

  PacMaxResult result;
  while (true) {
    if (live.size() == 1) {
      result.converged = true;
      break;
    }
    if (result.passes >= static_cast<std::size_t>(params.max_tighten_rounds)) {
      result.converged = false;
      break;
    }
    ++result.passes;

    std::sort(live.begin(), live.end(), [](const Cand& x, const Cand& y) {
      if (x.u != y.u) return x.u > y.u;
      return x.id < y.id;
    });

    PacPassLog pass;
    pass.queue_size = live.size();
    std::vector<Cand> survivors;
    survivors.reserve(live.size());
    double max_change = 0.0;
    for (Cand& c : live) {
      bool is_leader = (c.id == leader);
      if (!is_leader && c.u < leader_l + params.epsilon1) {
        ++pass.pruned;
        continue;
      }
      Subset probe = a.with(c.id);
      bounds.tighten(probe);
      ++result.tighten_calls;
      double nu = bounds.upper(probe);
      double nl = bounds.lower(probe);
      if (nu < nl)
        throw contract_violation("pac_max: provider returned U < L for " + to_string(probe));
      max_change = std::max({max_change, std::fabs(nu - c.u), std::fabs(nl - c.l)});
      c.u = nu;
      c.l = nl;
      if (is_leader) {
        leader_l = nl;
      } else {
        offer_leader(c.id, nl);
      }
      survivors.push_back(c);
      ++pass.tightened;
    }
    pass.max_change = max_change;
    pass.leader = leader;
    pass.leader_requeued = std::any_of(survivors.begin(), survivors.end(),
                                       [&](const Cand& c) { return c.id == leader; });
    result.pruned += pass.pruned;
    result.pass_logs.push_back(pass);
    live = std::move(survivors);

    if (max_change < params.t) {
      result.converged = (live.size() == 1);
      break;
    }
  }

  result.chosen = leader;
  result.chosen_lower = leader_l;
  return result;
}

// PAC greedy maximization: min(k, n) pac_max steps, accumulating the picks.
inline SelectionResult pac_greedy_max(BoundProvider& bounds, const GroundSet& x, int k,
                                      const PacParams& params) {
  params.validate();
  if (bounds.num_elements() != x.n)
    throw std::invalid_argument("pac_greedy_max: provider ground set does not match X");
  const std::size_t steps = detail::selection_steps(x, k);

  SelectionResult result;
  result.chosen = Subset(steps);
  for (std::size_t it = 0; it < steps; ++it) {
    IterationLog log;
    log.candidates = static_cast<std::size_t>(x.n) - result.chosen.size();
    PacMaxResult step = pac_max(bounds, result.chosen, params);
    result.chosen.add(step.chosen);
    log.chosen = step.chosen;
    log.value = step.chosen_lower;
    log.pruned = step.pruned;
    log.tighten_calls = step.tighten_calls;
    log.passes = step.passes;
    log.converged = step.converged;
    log.pass_logs = std::move(step.pass_logs);
    result.tighten_calls += step.tighten_calls;
    result.iterations.push_back(std::move(log));
  }
  return result;
}

}  // namespace submax
