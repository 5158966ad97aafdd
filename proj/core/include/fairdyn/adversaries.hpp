#pragma once

#include "fairdyn/model.hpp"
#include "fairdyn/policies.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fairdyn {

/// Uniform draw from [0, bound) by rejection sampling; avoids the
/// implementation-defined distributions so seeded streams are
/// identical across platforms.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

struct GeometricInstanceSpec {
  std::int64_t n = 1;
};

/// Arrival-only stream: job i (1-based) arrives at time i with weight
/// 2^{i-1}, so the cumulative weight after step t is exactly 2^t - 1.
EventStream geometric_instance(const GeometricInstanceSpec& spec);

enum class DepartureRule { None, RandomAlive, Lifo, Fifo };

struct RandomPermutationSpec {
  std::vector<BigInt> weights;  // multiset; one job per entry
  std::uint64_t seed = 0;
  DepartureRule departures = DepartureRule::RandomAlive;
};

/// Assigns the weight multiset to arrival slots 1..n by a uniformly
/// random permutation of the seed's RNG stream; when departures are
/// enabled the n arrivals are followed by n departures ordered by the
/// configured rule. Deterministic function of the spec.
EventStream random_permutation_stream(const RandomPermutationSpec& spec);

// ---------------------------------------------------------------------------
// Batch game: adaptive arrival/departure adversary versus an allocator
// claiming c-approximate weighted fairness.
// ---------------------------------------------------------------------------

struct BatchGameConfig {
  std::int64_t M = 0;  // base batch size; must be a multiple of b^{4*ceil(c)+1}
  std::int64_t b = 2;  // batch size divisor; weights scale by a = 2b
  Frac c{1};           // opponent's claimed approximation factor, >= 1
};

struct BatchRecord {
  int type = 0;
  std::vector<JobId> members;
  TimeStep arrived_at = 0;
  TimeStep departed_at = -1;  // -1 while alive
};

struct BatchStepRecord {
  TimeStep time = 0;
  int arrived_batch = -1;      // index into batches, -1 if none
  std::vector<JobId> departed;
  int disrupted_type = -1;     // smallest disrupted type at end of step
  bool phase_end = false;      // departures closed a phase this step
};

struct BatchGameResult {
  bool certified = true;
  std::string failure_reason;
  TimeStep failure_time = -1;
  std::int64_t total_arrivals = 0;
  std::int64_t phases = 0;
  int max_type = 0;
  DisruptionLedger ledger;
  AllocationTrace trace;              // end-of-step snapshots
  std::vector<BatchRecord> batches;
  std::vector<BatchStepRecord> steps;
};

/// Plays the batch phase game: while no batch is disrupted, the next
/// higher type arrives (type k has M/b^k jobs of weight (2b)^k); a
/// batch is disrupted when at least half its members' allocations
/// differ from the watermark taken the last time it was the highest
/// alive type; at the first disruption of smallest type k, every
/// batch of type > k departs and the phase ends. The game stops at
/// the first phase end with >= 3M total arrivals, or immediately if
/// the opponent's response is infeasible or not c-approximate.
BatchGameResult batch_adversary_run(const BatchGameConfig& config, Allocator& opponent);

// ---------------------------------------------------------------------------
// Monotone-share game versus an allocator claiming c-approximation.
// ---------------------------------------------------------------------------

struct MonotoneGameResult {
  bool certified = true;
  std::string failure_reason;
  TimeStep failure_time = -1;
  DisruptionLedger ledger;
  ShareMap final_imposed;
  AllocMap final_alloc;
  /// ceil((floor(log_c n) - 3) / 2), the per-job disruption target.
  std::int64_t required_disruptions = 0;
  std::int64_t low_share_jobs = 0;              // final imposed share <= c/n
  std::int64_t low_share_meeting_target = 0;    // ...and >= required disruptions
  std::int64_t target_job_count = 0;            // floor(n/c)
  bool bound_holds = false;
};

/// Drives n arrivals: each new job is imposed share 1/c; after every
/// response, the new job and every job the opponent disrupted have
/// their imposed share cut to 1/c of the current allocation, and the
/// lowered shares are revealed at the start of the next step. Requires
/// c >= 2 so imposed shares always sum to at most 1.
MonotoneGameResult monotone_adversary_run(std::int64_t n, const Frac& c, Allocator& opponent);

}  // namespace fairdyn
