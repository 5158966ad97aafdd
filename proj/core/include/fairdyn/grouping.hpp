#pragma once

#include "fairdyn/model.hpp"

#include <vector>

namespace fairdyn {

/// The arrival-only grouping reduction: jobs are packed into groups
/// G_0, G_1, ... whose cumulative weights W(G_i) are power-of-two
/// multiples of the first job's weight, with W(G_i) >= 2 W(G_{i-1}).
/// A job belongs to one group or straddles two consecutive groups; its
/// portions sum to its original weight. The open (last) group is
/// treated as if padded with a fictitious weight up to W(G_{i-1}).
struct GroupState {
  struct Portion {
    JobId id;
    BigInt amount;
  };
  struct Group {
    std::vector<Portion> members;
    BigInt real_weight{0};     // sum of member portions, no pad
    BigInt treated_weight{0};  // closed: W(G_i)-W(G_{i-1}); open: W(G_{i-1})
    bool closed = false;
  };

  BigInt unit{0};  // first job's weight; all W(G_i) are unit * 2^e
  std::vector<Group> groups;
  std::int64_t top_exp = 0;  // e of the last closed group: W = unit << e
  BigInt total_weight{0};    // real cumulative weight of arrived jobs

  bool has_open() const { return !groups.empty() && !groups.back().closed; }
  /// Pad weight of the open group (0 when no open group).
  BigInt pad_weight() const;
  /// Total weight the allocation rule pretends exists: 2 W(G_{k-1})
  /// once an open group exists, W(G_0) before that.
  BigInt effective_total() const;
};

struct GroupIngestResult {
  /// Indices of groups whose treated weight changed (the group that
  /// closed); empty when the job joined the open group in place.
  std::vector<std::size_t> reshaped;
  /// (group index, member slot) pairs where the new job's portions
  /// were placed.
  std::vector<std::pair<std::size_t, std::size_t>> placements;
  bool closed_a_group = false;
};

/// Adds an arriving job to the grouping. Arrival-only streams only.
GroupIngestResult logstar_group_ingest(GroupState& state, const Job& job);

}  // namespace fairdyn
