#include "fairdyn/tower.hpp"

namespace fairdyn {

TowerTable::TowerTable(std::int64_t bit_budget) : bit_budget_(bit_budget) {
  if (bit_budget < 1 || bit_budget > (std::int64_t(1) << 26))
    throw std::invalid_argument("TowerTable: bit budget out of range");
  log2_g_ = {BigInt(0), BigInt(1), BigInt(2), BigInt(4)};
  // Extend until the threshold exceeds the budget; that entry is k_cap.
  while (log2_g_.back() <= bit_budget_) {
    const int k = static_cast<int>(log2_g_.size()) + 1;
    // log2 g(k) = g(k-1) - (k-1) = 2^{log2 g(k-1)} - (k-1). The shift
    // amount is bounded by the budget because the loop condition held.
    const auto shift = static_cast<unsigned>(log2_g_.back());
    log2_g_.push_back((BigInt(1) << shift) - (k - 1));
  }
}

BigInt TowerTable::g(int k) const {
  const BigInt& e = log2_g(k);
  if (e > bit_budget_) throw std::domain_error("TowerTable::g: value exceeds bit budget");
  return BigInt(1) << static_cast<unsigned>(e);
}

int g_floor_inverse(const TowerTable& table, std::int64_t ratio_bits) {
  if (ratio_bits < 0) throw std::invalid_argument("g_floor_inverse: negative ratio");
  if (ratio_bits > table.bit_budget())
    throw std::domain_error("g_floor_inverse: bit-budget exceeded");
  int k = 1;
  while (k < table.k_cap() && table.log2_g(k + 1) <= ratio_bits) ++k;
  return k;
}

int log_star(const BigInt& n) {
  if (n < 1) throw std::invalid_argument("log_star: argument must be >= 1");
  if (n <= 1) return 0;
  // ceil(log2 n) for n >= 2; since log2 is monotone the iteration count
  // is unchanged by rounding intermediate values up to integers.
  const BigInt next = floor_log2(BigInt(n - 1)) + 1;
  return 1 + log_star(next);
}

}  // namespace fairdyn
