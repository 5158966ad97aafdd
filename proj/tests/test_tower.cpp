#include "doctest.h"
#include "fairdyn/tower.hpp"

using namespace fairdyn;

namespace {

// Independent recurrence oracle for log2 g(k): g(1..4) = 1, 2, 4, 16
// and g(k) = 2^{g(k-1)} / 2^{k-1}, i.e. log2 g(k) = g(k-1) - (k-1),
// computed here from the values themselves instead of the table's
// incremental form.
BigInt oracle_log2_g(int k) {
  const std::int64_t base[] = {0, 1, 2, 4};  // log2 of 1, 2, 4, 16
  if (k <= 4) return BigInt(base[k - 1]);
  // g(k-1) must still be representable as a value for this oracle.
  BigInt prev = BigInt(1) << static_cast<unsigned>(static_cast<std::int64_t>(oracle_log2_g(k - 1)));
  return prev - (k - 1);
}

}  // namespace

TEST_CASE("tower table matches the recurrence oracle") {
  TowerTable table;
  CHECK(table.g(1) == 1);
  CHECK(table.g(2) == 2);
  CHECK(table.g(3) == 4);
  CHECK(table.g(4) == 16);
  CHECK(table.g(5) == 4096);
  CHECK(table.log2_g(5) == 12);
  CHECK(table.log2_g(6) == 4091);
  for (int k = 1; k <= 6; ++k) CHECK(table.log2_g(k) == oracle_log2_g(k));
}

TEST_CASE("bit budget truncates the table") {
  TowerTable table(1 << 20);
  // log2 g(7) = g(6) - 6 = 2^4091 - 6, far beyond any budget; k_cap is
  // the first k whose threshold exceeds the budget.
  CHECK(table.k_cap() == 7);
  CHECK(table.log2_g(table.k_cap()) > table.bit_budget());
  CHECK(table.log2_g(table.k_cap() - 1) <= table.bit_budget());
  TowerTable tiny(10);
  CHECK(tiny.k_cap() == 5);  // log2 g(5) = 12 > 10
}

TEST_CASE("g_floor_inverse buckets by bit length") {
  TowerTable table;
  CHECK(g_floor_inverse(table, 0) == 1);
  CHECK(g_floor_inverse(table, 1) == 2);
  CHECK(g_floor_inverse(table, 2) == 3);
  CHECK(g_floor_inverse(table, 3) == 3);
  CHECK(g_floor_inverse(table, 4) == 4);
  CHECK(g_floor_inverse(table, 11) == 4);
  CHECK(g_floor_inverse(table, 12) == 5);
  CHECK(g_floor_inverse(table, 4090) == 5);
  CHECK(g_floor_inverse(table, 4091) == 6);
  CHECK_THROWS(g_floor_inverse(table, table.bit_budget() + 1));
}

TEST_CASE("log_star counts iterated logs") {
  CHECK(log_star(1) == 0);
  CHECK(log_star(2) == 1);
  CHECK(log_star(4) == 2);
  CHECK(log_star(16) == 3);
  CHECK(log_star(256) == 4);
  CHECK(log_star(BigInt(1) << 12) == 4);
  CHECK(log_star(BigInt(1) << 16) == 4);
  CHECK(log_star(65536) == 4);
  CHECK(log_star(BigInt(1) << 17) == 5);
}

TEST_CASE("log2 g values are strictly increasing up to the cap") {
  TowerTable table;
  for (int k = 2; k <= table.k_cap(); ++k) CHECK(table.log2_g(k) > table.log2_g(k - 1));
}
