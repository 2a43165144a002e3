#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "submax/ground_set.hpp"

namespace submax {

// Exact set-function oracle F. Implementations override value() and report
// their ground-set size; evaluate() counts every call so maximizers can
// report work honestly.
class ExactOracle {
 public:
  virtual ~ExactOracle() = default;

  double evaluate(const Subset& a) {
    ++evaluations_;
    return value(a);
  }

  std::uint64_t evaluations() const { return evaluations_; }
  virtual int num_elements() const = 0;

 protected:
  virtual double value(const Subset& a) = 0;

 private:
  std::uint64_t evaluations_ = 0;
};

// Marginal gain of adding `element` to `a`: F(A ∪ {i}) - F(A).
inline double marginal_gain(ExactOracle& oracle, const Subset& a, int element) {
  if (element < 0 || element >= oracle.num_elements())
    throw std::out_of_range("marginal_gain: element id " + std::to_string(element) +
                            " outside ground set of size " +
                            std::to_string(oracle.num_elements()));
  if (a.contains(element))
    throw std::invalid_argument("marginal_gain: element " + std::to_string(element) +
                                " already in subset");
  double with = oracle.evaluate(a.with(element));
  double base = oracle.evaluate(a);
  return with - base;
}

// Anytime confidence bounds on F: per queried subset, upper() >= lower() must
// hold at all times after initialization, and tighten() must (at least in
// expectation) shrink the interval. work() is a monotone counter whose unit
// is implementation-defined (documented per provider).
class BoundProvider {
 public:
  virtual ~BoundProvider() = default;

  virtual int num_elements() const = 0;
  virtual double upper(const Subset& a) = 0;
  virtual double lower(const Subset& a) = 0;
  virtual void tighten(const Subset& a) = 0;

  virtual std::uint64_t work() const { return work_; }

 protected:
  std::uint64_t work_ = 0;
};

// Adapter giving exact "bounds": U = L = F and tighten is a no-op. work()
// delegates to the oracle's evaluation count.
class ExactBounds final : public BoundProvider {
 public:
  explicit ExactBounds(ExactOracle& oracle) : oracle_(&oracle) {}

  int num_elements() const override { return oracle_->num_elements(); }
  double upper(const Subset& a) override { return oracle_->evaluate(a); }
  double lower(const Subset& a) override { return oracle_->evaluate(a); }
  void tighten(const Subset&) override {}
  std::uint64_t work() const override { return oracle_->evaluations(); }

 private:
  ExactOracle* oracle_;
};

inline ExactBounds exact_as_bounds(ExactOracle& oracle) { return ExactBounds(oracle); }

}  // namespace submax
