#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "submax/oracle.hpp"

namespace submax {

// Coverage objective F(A) = |union of the chosen sets|. Non-negative,
// monotone and submodular; the workhorse test instance.
class CoverageOracle final : public ExactOracle {
 public:
  CoverageOracle(int universe_size, std::vector<std::vector<int>> sets)
      : universe_(universe_size), sets_(std::move(sets)), mark_(universe_size, 0) {
    if (universe_ < 1) throw std::invalid_argument("CoverageOracle: empty universe");
    for (const auto& set : sets_)
      for (int item : set)
        if (item < 0 || item >= universe_)
          throw std::out_of_range("CoverageOracle: item outside universe");
  }

  int num_elements() const override { return static_cast<int>(sets_.size()); }
  const std::vector<std::vector<int>>& sets() const { return sets_; }

 protected:
  double value(const Subset& a) override {
    ++epoch_;
    int covered = 0;
    for (int id : a.ids()) {
      if (id < 0 || id >= num_elements())
        throw std::out_of_range("CoverageOracle: set id outside ground set");
      for (int item : sets_[id]) {
        if (mark_[item] != epoch_) {
          mark_[item] = epoch_;
          ++covered;
        }
      }
    }
    return covered;
  }

 private:
  int universe_;
  std::vector<std::vector<int>> sets_;
  std::vector<long long> mark_;  // epoch marking avoids clearing per call
  long long epoch_ = 0;
};

// Additive objective F(A) = sum of per-element weights.
class ModularOracle final : public ExactOracle {
 public:
  explicit ModularOracle(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("ModularOracle: no weights");
  }

  int num_elements() const override { return static_cast<int>(weights_.size()); }

 protected:
  double value(const Subset& a) override {
    double sum = 0.0;
    for (int id : a.ids()) {
      if (id < 0 || id >= num_elements())
        throw std::out_of_range("ModularOracle: id outside ground set");
      sum += weights_[id];
    }
    return sum;
  }

 private:
  std::vector<double> weights_;
};

// Wraps an arbitrary callable as an oracle; test and experiment plumbing.
class FunctionOracle final : public ExactOracle {
 public:
  FunctionOracle(int num_elements, std::function<double(const Subset&)> fn)
      : n_(num_elements), fn_(std::move(fn)) {
    if (n_ < 1) throw std::invalid_argument("FunctionOracle: empty ground set");
  }

  int num_elements() const override { return n_; }

 protected:
  double value(const Subset& a) override {
    for (int id : a.ids())
      if (id < 0 || id >= n_)
        throw std::out_of_range("FunctionOracle: id outside ground set");
    return fn_(a);
  }

 private:
  int n_;
  std::function<double(const Subset&)> fn_;
};

}  // namespace submax
