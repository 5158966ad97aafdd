#pragma once

#include "fairdyn/numeric.hpp"

#include <vector>

namespace fairdyn {

/// The rapidly growing bucketing function
///   g(1)=1, g(2)=2, g(3)=4, g(4)=16, g(k)=2^{g(k-1)} / 2^{k-1} for k>=5.
/// g(6) already needs 4092 bits and g(8) is not representable, so the
/// table stores log2 g(k) instead: log2 g(k) = g(k-1) - (k-1) for k>=5,
/// and floor-inverse lookups compare bit lengths, never the values
/// themselves. k_cap is the smallest k whose log2 g(k) exceeds the
/// configured bit budget; ratios beyond the budget are rejected.
class TowerTable {
 public:
  explicit TowerTable(std::int64_t bit_budget = std::int64_t(1) << 20);

  /// log2 g(k), 1-based; defined for k in [1, k_cap].
  const BigInt& log2_g(int k) const { return log2_g_.at(static_cast<std::size_t>(k - 1)); }
  int k_cap() const { return static_cast<int>(log2_g_.size()); }
  std::int64_t bit_budget() const { return bit_budget_; }

  /// g(k) as a value; only valid while log2 g(k) is itself desk-scale.
  BigInt g(int k) const;

 private:
  std::int64_t bit_budget_;
  std::vector<BigInt> log2_g_;
};

/// Largest k with log2 g(k) <= ratio_bits, where ratio_bits =
/// floor(log2(W_t / w_i)) >= 0. Throws when ratio_bits exceeds the
/// table's bit budget.
int g_floor_inverse(const TowerTable& table, std::int64_t ratio_bits);

/// Iterated base-2 logarithm: the smallest i such that applying log2
/// i times to n yields a value <= 1.
int log_star(const BigInt& n);

}  // namespace fairdyn
