#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace submax {

// Raised when a provider breaks its own contract (U < L, samples outside the
// declared range, ...), as opposed to caller errors.
class contract_violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ground set {0, 1, ..., n-1}.
struct GroundSet {
  int n = 0;

  explicit GroundSet(int count) : n(count) {
    if (n < 1) throw std::invalid_argument("GroundSet: element count must be >= 1");
  }
};

// An ordered set of distinct element ids. Insertion order is preserved so a
// selection records the order in which elements were picked. An optional
// cardinality limit guards accidental growth past k.
class Subset {
 public:
  static constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

  Subset() = default;
  explicit Subset(std::size_t k_limit) : limit_(k_limit) {}
  Subset(std::initializer_list<int> ids, std::size_t k_limit = kNoLimit)
      : limit_(k_limit) {
    for (int id : ids) add(id);
  }

  void add(int id) {
    if (id < 0) throw std::out_of_range("Subset: negative element id");
    if (contains(id))
      throw std::invalid_argument("Subset: duplicate element id " + std::to_string(id));
    if (ids_.size() >= limit_)
      throw std::invalid_argument("Subset: cardinality limit exceeded");
    ids_.push_back(id);
  }

  bool contains(int id) const {
    return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
  }

  // Copy of this subset with one more element; the probe A ∪ {i}.
  Subset with(int id) const {
    Subset s = *this;
    s.add(id);
    return s;
  }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::size_t k_limit() const { return limit_; }
  const std::vector<int>& ids() const { return ids_; }
  int operator[](std::size_t i) const { return ids_[i]; }

  // Ids in ascending order; canonical key for per-subset provider state.
  std::vector<int> sorted_ids() const {
    std::vector<int> s = ids_;
    std::sort(s.begin(), s.end());
    return s;
  }

  // Order-sensitive equality (pick order matters for equivalence checks).
  bool operator==(const Subset& other) const { return ids_ == other.ids_; }

  // Set equality, ignoring pick order.
  bool same_elements(const Subset& other) const {
    return sorted_ids() == other.sorted_ids();
  }

 private:
  std::vector<int> ids_;
  std::size_t limit_ = kNoLimit;
};

inline std::string to_string(const Subset& a) {
  std::string s = "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + "}";
}

}  // namespace submax
