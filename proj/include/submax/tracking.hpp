#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "submax/belief.hpp"
#include "submax/entropy_provider.hpp"
#include "submax/ground_set.hpp"
#include "submax/instances.hpp"
#include "submax/maximizers.hpp"
#include "submax/pac.hpp"
#include "submax/random.hpp"
#include "submax/sampled_entropy.hpp"
#include "submax/sensor_model.hpp"

namespace submax {

struct GridSpec {
  int width = 16;
  int height = 16;
  bool torus = true;
  double stay_prob = 0.4;       // remainder split uniformly over the neighbors
  int num_sensors = 20;
  double coverage_radius = 3.0; // sensors fire on cells within this distance
  double flip_noise = 0.1;
  std::uint64_t placement_seed = 0;
};

// Grid world: states are cells, motion is a lazy random walk, sensors are
// noisy coverage indicators. Immutable after construction.
class Environment {
 public:
  Environment(SensorModel model, std::vector<std::vector<std::pair<int, double>>> transitions)
      : model_(std::move(model)), trans_(std::move(transitions)) {
    if (trans_.size() != static_cast<std::size_t>(model_.num_states()))
      throw std::invalid_argument("Environment: one transition row per state required");
    for (std::size_t s = 0; s < trans_.size(); ++s) {
      double sum = 0.0;
      for (const auto& [next, p] : trans_[s]) {
        if (next < 0 || next >= model_.num_states())
          throw std::out_of_range("Environment: transition target outside state space");
        if (p < 0.0) throw std::invalid_argument("Environment: negative transition probability");
        sum += p;
      }
      if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("Environment: transition row " + std::to_string(s) +
                                    " sums to " + std::to_string(sum));
    }
  }

  static Environment grid_world(const GridSpec& spec) {
    if (spec.width < 1 || spec.height < 1)
      throw std::invalid_argument("grid_world: degenerate grid");
    if (spec.stay_prob < 0.0 || spec.stay_prob > 1.0)
      throw std::invalid_argument("grid_world: stay_prob must be in [0, 1]");
    if (spec.num_sensors < 0)
      throw std::invalid_argument("grid_world: num_sensors must be >= 0");
    const int num_cells = spec.width * spec.height;

    // Lazy random walk over the 4-neighborhood.
    std::vector<std::vector<std::pair<int, double>>> trans(
        static_cast<std::size_t>(num_cells));
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        int cell = y * spec.width + x;
        std::vector<int> neighbors;
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int dir = 0; dir < 4; ++dir) {
          int nx = x + dx[dir], ny = y + dy[dir];
          if (spec.torus) {
            nx = (nx + spec.width) % spec.width;
            ny = (ny + spec.height) % spec.height;
          } else if (nx < 0 || nx >= spec.width || ny < 0 || ny >= spec.height) {
            continue;
          }
          neighbors.push_back(ny * spec.width + nx);
        }
        auto& row = trans[static_cast<std::size_t>(cell)];
        if (neighbors.empty()) {
          row.emplace_back(cell, 1.0);
        } else {
          row.emplace_back(cell, spec.stay_prob);
          double move = (1.0 - spec.stay_prob) / static_cast<double>(neighbors.size());
          for (int n : neighbors) row.emplace_back(n, move);
        }
      }
    }

    // Sensor centers: distinct cells drawn from the placement seed.
    Rng rng(derive_seed(spec.placement_seed, 0x91d5));
    std::vector<int> cells(static_cast<std::size_t>(num_cells));
    for (int c = 0; c < num_cells; ++c) cells[static_cast<std::size_t>(c)] = c;
    std::vector<int> centers = sample_without_replacement(
        rng, std::move(cells),
        static_cast<std::size_t>(std::min(spec.num_sensors, num_cells)));
    while (static_cast<int>(centers.size()) < spec.num_sensors)
      centers.push_back(static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(num_cells))));

    auto wrapped_delta = [](int a, int b, int extent, bool torus) {
      int d = std::abs(a - b);
      if (torus) d = std::min(d, extent - d);
      return d;
    };
    std::vector<std::vector<int>> regions;
    regions.reserve(centers.size());
    for (int center : centers) {
      int cx = center % spec.width, cy = center / spec.width;
      std::vector<int> region;
      for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
          int ddx = wrapped_delta(x, cx, spec.width, spec.torus);
          int ddy = wrapped_delta(y, cy, spec.height, spec.torus);
          if (ddx * ddx + ddy * ddy <= spec.coverage_radius * spec.coverage_radius)
            region.push_back(y * spec.width + x);
        }
      }
      regions.push_back(std::move(region));
    }
    Environment env(flip_noise_world(num_cells, regions, spec.flip_noise), std::move(trans));
    env.centers_ = std::move(centers);
    return env;
  }

  int num_states() const { return model_.num_states(); }
  const SensorModel& model() const { return model_; }
  const std::vector<int>& sensor_centers() const { return centers_; }

  int step_state(int s, Rng& rng) const {
    double u = uniform_double(rng);
    double acc = 0.0;
    const auto& row = trans_[static_cast<std::size_t>(s)];
    for (const auto& [next, p] : row) {
      acc += p;
      if (u < acc) return next;
    }
    return row.back().first;
  }

  // True iff s -> next has positive probability.
  bool transition_possible(int s, int next) const {
    for (const auto& [target, p] : trans_[static_cast<std::size_t>(s)])
      if (target == next && p > 0.0) return true;
    return false;
  }

 private:
  SensorModel model_;
  std::vector<std::vector<std::pair<int, double>>> trans_;
  std::vector<int> centers_;
};

using Trajectory = std::vector<int>;

// Uniform initial cell, then T-1 motion steps.
inline Trajectory generate_trajectory(const Environment& env, int t, std::uint64_t seed) {
  if (t < 1) throw std::invalid_argument("generate_trajectory: T must be >= 1");
  Rng rng(derive_seed(seed, 0x7247));
  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(t));
  traj.push_back(static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(env.num_states()))));
  for (int i = 1; i < t; ++i) traj.push_back(env.step_state(traj.back(), rng));
  return traj;
}

// Ingests text records "trajectory-id timestep x y" (whitespace separated,
// '#' comments). Timesteps must be contiguous from 0 per trajectory; x/y are
// floored onto grid cells and must land inside the grid.
inline std::vector<Trajectory> load_trajectories(std::istream& in, int width, int height) {
  std::map<long long, Trajectory> by_id;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long id;
    long long timestep;
    double x, y;
    if (!(fields >> id)) continue;  // blank line
    if (!(fields >> timestep >> x >> y))
      throw std::runtime_error("trajectories: malformed record at line " +
                               std::to_string(line_no));
    if (x < 0.0 || x >= width || y < 0.0 || y >= height)
      throw std::runtime_error("trajectories: position outside grid at line " +
                               std::to_string(line_no));
    Trajectory& traj = by_id[id];
    if (timestep != static_cast<long long>(traj.size()))
      throw std::runtime_error("trajectories: non-contiguous timestep at line " +
                               std::to_string(line_no));
    traj.push_back(static_cast<int>(std::floor(y)) * width + static_cast<int>(std::floor(x)));
  }
  std::vector<Trajectory> result;
  result.reserve(by_id.size());
  for (auto& [id, traj] : by_id) {
    if (traj.empty()) continue;
    result.push_back(std::move(traj));
  }
  if (result.empty()) throw std::runtime_error("trajectories: no records found");
  return result;
}

struct FilterStepResult {
  SampleSet particles;
  bool reset = false;
};

// Unweighted particle filter step: propagate every particle through the
// motion model, then rejection-resample against the observation (accept a
// uniformly drawn propagated particle with probability proportional to its
// likelihood). If the attempt budget runs out -- every propagated particle
// has zero likelihood, or acceptance is pathologically rare -- the particle
// set is reinitialized uniformly and the step flagged.
inline FilterStepResult particle_filter_step(const SampleSet& particles, const Environment& env,
                                             const Subset& a, const JointObservation& z,
                                             std::uint64_t seed, int max_attempts_factor = 256) {
  const int p_count = particles.count();
  if (p_count < 1) throw std::invalid_argument("particle_filter_step: empty particle set");
  Rng rng(derive_seed(seed, 0xf117e2));

  std::vector<int> propagated(particles.states.size());
  for (std::size_t i = 0; i < propagated.size(); ++i)
    propagated[i] = env.step_state(particles.states[i], rng);

  if (a.empty()) return {{std::move(propagated)}, false};
  env.model().validate_observation(a, z);

  // Per-state likelihoods, computed lazily; states repeat heavily.
  std::vector<double> lik_cache(static_cast<std::size_t>(env.num_states()), -1.0);
  auto likelihood = [&](int s) {
    double& lik = lik_cache[static_cast<std::size_t>(s)];
    if (lik < 0.0) lik = env.model().joint_given_state(a, z, s);
    return lik;
  };

  double max_lik = 0.0;
  for (int s : propagated) max_lik = std::max(max_lik, likelihood(s));

  auto uniform_reset = [&]() {
    std::vector<int> fresh(static_cast<std::size_t>(p_count));
    for (int& s : fresh)
      s = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(env.num_states())));
    return FilterStepResult{{std::move(fresh)}, true};
  };
  if (max_lik <= 0.0) return uniform_reset();

  std::vector<int> accepted;
  accepted.reserve(static_cast<std::size_t>(p_count));
  std::uint64_t attempts = 0;
  const std::uint64_t max_attempts =
      static_cast<std::uint64_t>(max_attempts_factor) * static_cast<std::uint64_t>(p_count);
  while (accepted.size() < static_cast<std::size_t>(p_count)) {
    if (attempts++ >= max_attempts) return uniform_reset();
    int s = propagated[uniform_below(rng, static_cast<std::uint64_t>(p_count))];
    if (uniform_double(rng) * max_lik < likelihood(s)) accepted.push_back(s);
  }
  return {{std::move(accepted)}, false};
}

// Mode of the particle histogram, ties to the lowest cell id.
inline int predict_state(const SampleSet& particles) {
  if (particles.count() < 1) throw std::invalid_argument("predict_state: empty particle set");
  std::map<int, int> counts;
  for (int s : particles.states) ++counts[s];
  int best_state = -1, best_count = -1;
  for (const auto& [state, count] : counts) {
    if (count > best_count) {  // map iterates in id order, so ties keep the lowest
      best_count = count;
      best_state = state;
    }
  }
  return best_state;
}

enum class TrackerMaximizer { kGreedyEstimate, kLazierEstimate, kPacEntropy };

struct TrackingConfig {
  TrackerMaximizer maximizer = TrackerMaximizer::kGreedyEstimate;
  int k = 1;
  int particles = 1024;
  int num_timesteps = 100;
  int trajectories = 50;
  std::uint64_t seed = 0;

  int lazier_r = 4;

  // Greedy/lazier estimate budgets.
  int m_est = 512;
  int n_est = 4096;

  // PAC selection: cheap initial bounds, one tightening round.
  PacParams pac{.epsilon1 = 0.05, .t = 0.03, .max_tighten_rounds = 1};
  EntropyBoundConfig bounds{.m_fine = 64,
                            .m_coarse = 512,
                            .n_draws_fine0 = 128,
                            .n_draws_coarse = 768,
                            .d0 = 2,
                            .delta_eta = 0.05};

  void validate(const Environment& env) const {
    if (k < 0) throw std::invalid_argument("TrackingConfig: k must be >= 0");
    if (k > env.model().num_sensors())
      throw std::invalid_argument("TrackingConfig: k exceeds sensor count");
    if (particles < 1) throw std::invalid_argument("TrackingConfig: particles must be >= 1");
    if (num_timesteps < 1) throw std::invalid_argument("TrackingConfig: T must be >= 1");
    if (trajectories < 1) throw std::invalid_argument("TrackingConfig: trajectories must be >= 1");
    if (maximizer == TrackerMaximizer::kLazierEstimate &&
        (lazier_r < 1 || lazier_r > env.model().num_sensors()))
      throw std::invalid_argument("TrackingConfig: lazier R must satisfy 1 <= R <= n");
  }
};

struct StepRecord {
  Subset selected;
  JointObservation observation;
  int predicted = -1;
  bool correct = false;
  bool filter_reset = false;
  std::uint64_t work = 0;  // posterior draws spent selecting this step
};

struct RunRecord {
  std::vector<StepRecord> steps;
  std::uint64_t correct = 0;
  std::uint64_t work = 0;
  std::uint64_t filter_resets = 0;
  double wall_ms = 0.0;

  double accuracy() const {
    return steps.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(steps.size());
  }
};

// One tracked trajectory: per timestep, build the belief from the particles,
// select sensors with the configured maximizer, observe, filter, predict.
inline RunRecord run_single_trajectory(const Environment& env, const Trajectory& trajectory,
                                       const TrackingConfig& cfg, std::uint64_t run_seed) {
  cfg.validate(env);
  if (trajectory.empty()) throw std::invalid_argument("run_single_trajectory: empty trajectory");
  const int n = env.model().num_sensors();
  const auto start = std::chrono::steady_clock::now();

  RunRecord record;
  Rng init_rng(derive_seed(run_seed, 0x1417));
  SampleSet particles;
  particles.states.resize(static_cast<std::size_t>(cfg.particles));
  for (int& s : particles.states)
    s = static_cast<int>(uniform_below(init_rng, static_cast<std::uint64_t>(env.num_states())));

  Rng obs_rng(derive_seed(run_seed, 0x0b52));
  for (std::size_t step = 0; step < trajectory.size(); ++step) {
    const int true_state = trajectory[step];
    StepRecord rec;

    Subset selected;
    std::uint64_t work = 0;
    if (n > 0 && cfg.k > 0) {
      Belief belief = mle_belief(particles, env.num_states());
      GroundSet ground(n);
      std::uint64_t select_seed = derive_seed(run_seed, step, 0x5e1ec7);
      switch (cfg.maximizer) {
        case TrackerMaximizer::kGreedyEstimate: {
          SampledObjectiveOracle oracle(env.model(), belief, cfg.m_est, cfg.n_est, select_seed);
          selected = greedy_max(oracle, ground, cfg.k).chosen;
          work = oracle.posterior_draws();
          break;
        }
        case TrackerMaximizer::kLazierEstimate: {
          SampledObjectiveOracle oracle(env.model(), belief, cfg.m_est, cfg.n_est, select_seed);
          selected = lazier_greedy_max(oracle, ground, cfg.k, cfg.lazier_r, select_seed).chosen;
          work = oracle.posterior_draws();
          break;
        }
        case TrackerMaximizer::kPacEntropy: {
          EntropyBoundConfig bounds = cfg.bounds;
          bounds.seed = select_seed;
          EntropyBoundProvider provider(env.model(), belief, bounds);
          selected = pac_greedy_max(provider, ground, cfg.k, cfg.pac).chosen;
          work = provider.posterior_draws();
          break;
        }
      }
    }

    JointObservation z = JointObservation::null_for(n);
    for (int i : selected.ids())
      z.values[static_cast<std::size_t>(i)] = env.model().sample_value(i, true_state, obs_rng);

    FilterStepResult fs =
        particle_filter_step(particles, env, selected, z, derive_seed(run_seed, step, 0xf171));
    particles = std::move(fs.particles);

    rec.selected = std::move(selected);
    rec.observation = std::move(z);
    rec.predicted = predict_state(particles);
    rec.correct = rec.predicted == true_state;
    rec.filter_reset = fs.reset;
    rec.work = work;
    record.correct += rec.correct ? 1 : 0;
    record.work += work;
    record.filter_resets += fs.reset ? 1 : 0;
    record.steps.push_back(std::move(rec));
  }
  record.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return record;
}

// Full experiment: one record per trajectory, each on an isolated substream.
// Supplied trajectories (ingested data) replace synthetic generation; they
// are truncated to T and must be at least that long.
inline std::vector<RunRecord> run_tracking_experiment(
    const Environment& env, const TrackingConfig& cfg,
    const std::vector<Trajectory>* provided = nullptr) {
  cfg.validate(env);
  std::vector<RunRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.trajectories));
  for (int trial = 0; trial < cfg.trajectories; ++trial) {
    std::uint64_t traj_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), 0x72a1);
    Trajectory trajectory;
    if (provided) {
      const Trajectory& source = (*provided)[static_cast<std::size_t>(trial) % provided->size()];
      if (static_cast<int>(source.size()) < cfg.num_timesteps)
        throw std::invalid_argument("run_tracking_experiment: provided trajectory shorter than T");
      trajectory.assign(source.begin(), source.begin() + cfg.num_timesteps);
    } else {
      trajectory = generate_trajectory(env, cfg.num_timesteps, traj_seed);
    }
    records.push_back(run_single_trajectory(env, trajectory, cfg, traj_seed));
  }
  return records;
}

}  // namespace submax
