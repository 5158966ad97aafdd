#pragma once

#include "fairdyn/grouping.hpp"
#include "fairdyn/model.hpp"
#include "fairdyn/tower.hpp"

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <vector>

namespace fairdyn {

/// Group-level allocation rule: (1/12) / g(floor(g^{-1}(W_t / w_i)))
/// while the group's fair share is at least 1/(12*2^i); below that the
/// allocation freezes at the floor 1/(12*2^i).
Frac logstar_allocate(const TowerTable& table, std::size_t group_index, const BigInt& group_weight,
                      const BigInt& total_weight);

/// Weighted fair allocation for arrival-only streams with O(log* n)
/// disruptions per job: groups arrivals into power-of-two cumulative
/// weight classes and buckets each group's fair share through the
/// tower function. Allocation values change only when a group's bucket
/// moves, so work per arrival is amortized O(1) group recomputations.
class LogStarAllocator : public Allocator {
 public:
  /// With track_values=false the allocator maintains only the group
  /// structure and change lists (the returned map stays empty): exact
  /// per-job values cost large-integer normalizations that disruption
  /// scaling runs do not need. Change lists are identical to the
  /// tracking mode except for exact cancellations across two
  /// simultaneously re-priced straddled groups, which cannot occur
  /// while group allocations move monotonically.
  explicit LogStarAllocator(TowerTable table = TowerTable(), bool guess_and_double = false,
                            bool track_values = true);

  const AllocMap& on_arrival(const Job& job, const ShareMap& shares) override;
  const AllocMap& on_departure(JobId id, const ShareMap& shares) override;
  const AllocMap& on_share_update(const ShareMap& shares) override;
  const std::vector<JobId>& last_changed() const override { return changed_; }
  bool needs_shares() const override { return false; }

  const GroupState& groups() const { return groups_; }
  /// Exact sum of all job allocations, maintained incrementally
  /// (excludes the reserved pad slice).
  const Frac& allocation_sum() const { return alloc_sum_; }
  /// Allocation reserved for the fictitious pad weight of the open group.
  Frac pad_reserved() const;

 private:
  struct Slice {
    std::size_t group;
    std::size_t slot;
    Frac contribution;
  };

  void recompute_group(std::size_t gi, bool reshaped);
  void refresh_member(std::size_t gi, std::size_t slot);
  void scale_member(std::size_t gi, std::size_t slot, const Frac& factor);
  void schedule_next_event(std::size_t gi);
  void drain_events();
  void note_change(JobId id, const Frac& value);
  void note_changed_id(JobId id);

  TowerTable table_;
  GroupState groups_;
  std::vector<Frac> group_alloc_;
  std::vector<BigInt> group_treated_;  // treated weight at last recompute
  std::multimap<BigInt, std::size_t> events_;  // next effective total -> group
  std::map<JobId, std::vector<Slice>> slices_;
  AllocMap allocs_;
  Frac alloc_sum_{0};
  std::vector<JobId> changed_;
  JobId arriving_ = -1;
  bool guess_and_double_;
  bool track_values_;
  BigInt guess_{1};
  std::int64_t jobs_seen_ = 0;
};

/// Randomized full-reset algorithm for arrival-departure streams:
/// every allocation is half the job's fair share as of the last reset
/// (or its own arrival); a reset fires whenever the total weight
/// crosses a threshold 2^k * T, T drawn once from [1/2, 1).
class ThresholdResetAllocator : public Allocator {
 public:
  explicit ThresholdResetAllocator(std::uint64_t seed);
  /// Test hook: pins T directly. Requires 1/2 <= T < 1.
  explicit ThresholdResetAllocator(Frac threshold_base);

  const AllocMap& on_arrival(const Job& job, const ShareMap& shares) override;
  const AllocMap& on_departure(JobId id, const ShareMap& shares) override;
  const AllocMap& on_share_update(const ShareMap& shares) override;
  const std::vector<JobId>& last_changed() const override { return changed_; }
  bool needs_shares() const override { return false; }

  const Frac& threshold_base() const { return threshold_; }
  std::uint64_t resets() const { return resets_; }

 private:
  bool crosses(const BigInt& lo, const BigInt& hi) const;
  void reset_all();

  Frac threshold_;
  BigInt total_{0};
  std::map<JobId, BigInt> weights_;
  AllocMap allocs_;
  std::vector<JobId> changed_;
  std::uint64_t resets_ = 0;
};

/// (1+eps)-approximate allocator for arbitrary monotone share streams
/// (arrival-only). Jobs whose share falls to eps/(2n) are light and
/// frozen; heavy jobs are reset to share/(1+eps) once their share
/// drops below (1+eps/2) times the current allocation.
class LightHeavyAllocator : public Allocator {
 public:
  LightHeavyAllocator(Frac epsilon, std::int64_t declared_n);
  /// Guess-and-double mode: starts with guess 1 and rebuilds on each
  /// doubling of the alive-job count.
  explicit LightHeavyAllocator(Frac epsilon);

  const AllocMap& on_arrival(const Job& job, const ShareMap& shares) override;
  const AllocMap& on_departure(JobId id, const ShareMap& shares) override;
  const AllocMap& on_share_update(const ShareMap& shares) override;
  const std::vector<JobId>& last_changed() const override { return changed_; }

  bool is_light(JobId id) const { return light_.count(id) > 0; }
  const Frac& light_threshold() const { return light_threshold_; }

 private:
  void apply_update(JobId id, const Frac& share);
  void rebuild_for_guess();

  Frac epsilon_;
  Frac one_plus_eps_;
  Frac reset_factor_;  // 1 + eps/2
  Frac light_threshold_;
  bool doubling_;
  BigInt guess_{1};
  ShareMap shares_;
  AllocMap allocs_;
  std::map<JobId, bool> light_;
  std::vector<JobId> changed_;
};

/// Perfectly fair baseline: allocation equals fair share, every share
/// change is a disruption.
class ExactAllocator : public Allocator {
 public:
  const AllocMap& on_arrival(const Job& job, const ShareMap& shares) override;
  const AllocMap& on_departure(JobId id, const ShareMap& shares) override;
  const AllocMap& on_share_update(const ShareMap& shares) override;
  const std::vector<JobId>& last_changed() const override { return changed_; }

 private:
  const AllocMap& assign(const ShareMap& shares, JobId arriving);
  AllocMap allocs_;
  std::vector<JobId> changed_;
};

using AllocatorFactory = std::function<std::unique_ptr<Allocator>()>;

/// Runs one independent base allocator per resource dimension. A job's
/// disruption is counted once per step if any dimension changed; the
/// per-dimension change lists are also exposed for the D-scaled
/// comparison.
class MultiDimAllocator {
 public:
  MultiDimAllocator(const AllocatorFactory& factory, int dimensions);

  void on_arrival(const Job& job, const std::vector<ShareMap>& shares);
  void on_departure(JobId id, const std::vector<ShareMap>& shares);
  void on_share_update(const std::vector<ShareMap>& shares);

  int dimensions() const { return static_cast<int>(dims_.size()); }
  const AllocMap& allocation(int d) const { return *last_maps_.at(static_cast<std::size_t>(d)); }
  /// Jobs changed in any dimension by the last call, deduplicated.
  const std::vector<JobId>& last_changed() const { return changed_; }
  const std::vector<JobId>& last_changed_in(int d) const {
    return dims_.at(static_cast<std::size_t>(d))->last_changed();
  }
  bool needs_shares() const { return needs_shares_; }

 private:
  void collect_changes();

  std::vector<std::unique_ptr<Allocator>> dims_;
  std::vector<const AllocMap*> last_maps_;
  std::vector<JobId> changed_;
  bool needs_shares_ = true;
};

}  // namespace fairdyn
