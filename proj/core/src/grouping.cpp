#include "fairdyn/grouping.hpp"

namespace fairdyn {

BigInt GroupState::pad_weight() const {
  if (!has_open()) return 0;
  return groups.back().treated_weight - groups.back().real_weight;
}

BigInt GroupState::effective_total() const {
  if (groups.empty()) return 0;
  if (!has_open()) return unit << static_cast<unsigned>(top_exp);
  return unit << static_cast<unsigned>(top_exp + 1);
}

GroupIngestResult logstar_group_ingest(GroupState& state, const Job& job) {
  GroupIngestResult result;
  if (job.weight < 1) throw std::invalid_argument("group ingest: weight must be >= 1");

  if (state.groups.empty()) {
    state.unit = job.weight;
    GroupState::Group g0;
    g0.members.push_back({job.id, job.weight});
    g0.real_weight = job.weight;
    g0.treated_weight = job.weight;
    g0.closed = true;
    state.groups.push_back(std::move(g0));
    state.top_exp = 0;
    state.total_weight = job.weight;
    result.placements.emplace_back(0, 0);
    return result;
  }

  if (!state.has_open()) {
    GroupState::Group open;
    open.treated_weight = state.unit << static_cast<unsigned>(state.top_exp);
    state.groups.push_back(std::move(open));
  }

  const BigInt before = state.total_weight;
  state.total_weight += job.weight;
  const BigInt cap = state.unit << static_cast<unsigned>(state.top_exp + 1);  // 2 W(G_{i})

  auto& open = state.groups.back();
  const std::size_t open_idx = state.groups.size() - 1;

  if (state.total_weight <= cap) {
    open.members.push_back({job.id, job.weight});
    open.real_weight += job.weight;
    result.placements.emplace_back(open_idx, open.members.size() - 1);
    return result;
  }

  // Close the open group at W(G_{i+1}) = unit * 2^k where
  // k = floor(log2((cumulative weight + w_j) / unit)). The closing
  // portion is unit*2^k - cumulative; the remainder seeds the next
  // group.
  // floor(log2(total/unit)) without materializing the quotient: msb
  // difference, corrected by one exact shifted comparison.
  const std::int64_t d = floor_log2(state.total_weight) - floor_log2(state.unit);
  const std::int64_t k =
      (state.unit << static_cast<unsigned>(d)) <= state.total_weight ? d : d - 1;
  const BigInt closed_cum = state.unit << static_cast<unsigned>(k);
  const BigInt head = closed_cum - before;
  const BigInt tail = state.total_weight - closed_cum;

  if (head > 0) {
    open.members.push_back({job.id, head});
    open.real_weight += head;
    result.placements.emplace_back(open_idx, open.members.size() - 1);
  }
  open.closed = true;
  open.treated_weight = open.real_weight;  // pad removed
  state.top_exp = k;
  result.reshaped.push_back(open_idx);
  result.closed_a_group = true;

  GroupState::Group next;
  next.treated_weight = closed_cum;
  if (tail > 0) {
    next.members.push_back({job.id, tail});
    next.real_weight = tail;
  }
  state.groups.push_back(std::move(next));
  if (tail > 0) result.placements.emplace_back(state.groups.size() - 1, 0);
  return result;
}

}  // namespace fairdyn
