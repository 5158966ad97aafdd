#include "doctest.h"
#include "fairdyn/grouping.hpp"

#include <map>
#include <random>

using namespace fairdyn;

namespace {

Job mk(JobId id, BigInt w) {
  Job j;
  j.id = id;
  j.weight = std::move(w);
  return j;
}

void check_invariants(const GroupState& s) {
  BigInt cumulative{0};
  BigInt member_total{0};
  for (std::size_t i = 0; i < s.groups.size(); ++i) {
    const auto& g = s.groups[i];
    BigInt real{0};
    for (const auto& p : g.members) real += p.amount;
    CHECK(real == g.real_weight);
    member_total += real;
    if (g.closed) {
      CHECK(g.treated_weight == g.real_weight);
      cumulative += real;
      // Closed boundaries sit at power-of-two multiples of the unit.
      BigInt q = cumulative / s.unit;
      CHECK(q * s.unit == cumulative);
      CHECK((q & (q - 1)) == 0);
    } else {
      CHECK(i == s.groups.size() - 1);
      CHECK(g.treated_weight >= g.real_weight);
    }
  }
  CHECK(member_total == s.total_weight);
}

}  // namespace

TEST_CASE("first job seeds a closed unit group") {
  GroupState s;
  auto r = logstar_group_ingest(s, mk(1, 5));
  CHECK(s.unit == 5);
  CHECK(s.groups.size() == 1);
  CHECK(s.groups[0].closed);
  CHECK(s.groups[0].treated_weight == 5);
  CHECK(s.effective_total() == 5);
  CHECK(r.placements == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}});
  CHECK(r.reshaped.empty());
}

TEST_CASE("small second job joins a padded open group") {
  GroupState s;
  logstar_group_ingest(s, mk(1, 5));
  auto r = logstar_group_ingest(s, mk(2, 1));
  CHECK(s.groups.size() == 2);
  CHECK(!s.groups[1].closed);
  CHECK(s.groups[1].real_weight == 1);
  CHECK(s.groups[1].treated_weight == 5);  // padded to W(G_0)
  CHECK(s.pad_weight() == 4);
  CHECK(s.effective_total() == 10);  // 2 W(G_0) while a group is open
  CHECK(r.reshaped.empty());
  check_invariants(s);
}

TEST_CASE("overflowing job straddles at the correct power boundary") {
  GroupState s;
  logstar_group_ingest(s, mk(1, 1));
  logstar_group_ingest(s, mk(2, 1));  // closes nothing; open real 1
  auto r3 = logstar_group_ingest(s, mk(3, 2));
  // Cumulative 4: the open group closes at W = 4 with portion 2.
  CHECK(r3.closed_a_group);
  CHECK(s.groups[1].closed);
  CHECK(s.groups[1].treated_weight == 3);
  CHECK(s.top_exp == 2);
  check_invariants(s);

  // w=6 on cumulative 4: boundary is unit*2^floor(log2 10) = 8, so the
  // job splits 4 into the closing group and 2 into the new open one.
  auto r4 = logstar_group_ingest(s, mk(4, 6));
  CHECK(r4.closed_a_group);
  CHECK(r4.placements.size() == 2);
  CHECK(s.groups[2].closed);
  CHECK(s.groups[2].members.back().id == 4);
  CHECK(s.groups[2].members.back().amount == 4);
  CHECK(s.groups[3].real_weight == 2);
  CHECK(s.groups[3].treated_weight == 8);
  CHECK(s.top_exp == 3);
  CHECK(s.effective_total() == 16);
  check_invariants(s);
}

TEST_CASE("doubling weights each close exactly one group") {
  GroupState s;
  for (int i = 0; i < 20; ++i) {
    logstar_group_ingest(s, mk(i + 1, BigInt(1) << i));
    check_invariants(s);
  }
  // Cumulative after step t is 2^t - 1: every group but the first stays
  // open until the next arrival closes it.
  CHECK(s.total_weight == (BigInt(1) << 20) - 1);
  CHECK(s.groups.size() == 21);
  CHECK(s.top_exp == 19);
}

TEST_CASE("random weights keep every invariant") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    GroupState s;
    std::map<JobId, BigInt> weights;
    for (int i = 0; i < 200; ++i) {
      const BigInt w = 1 + BigInt(rng() % 1000);
      weights[i + 1] = w;
      logstar_group_ingest(s, mk(i + 1, w));
    }
    check_invariants(s);
    // Each job's portions across groups sum to its weight.
    std::map<JobId, BigInt> portioned;
    for (const auto& g : s.groups)
      for (const auto& p : g.members) portioned[p.id] += p.amount;
    CHECK(portioned == weights);
  }
}
