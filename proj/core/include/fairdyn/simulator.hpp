#pragma once

#include "fairdyn/allocators.hpp"
#include "fairdyn/model.hpp"
#include "fairdyn/policies.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fairdyn {

enum class Strictness { Halt, Record };

struct RunOptions {
  /// Approximation claim checked by the referee: allocation >= share/c.
  Frac claimed_c{24};
  Strictness strictness = Strictness::Halt;
  /// When false the run only maintains the ledger (for large scaling
  /// runs); feasibility/approximation checks and ratios are skipped.
  bool check_invariants = true;
  bool capture_trace = false;
};

struct RunReport {
  std::int64_t arrivals = 0;
  std::int64_t departures = 0;
  std::uint64_t total_disruptions = 0;
  std::uint64_t min_per_job = 0;
  std::uint64_t max_per_job = 0;
  double mean_per_job = 0.0;
  double mean_per_event = 0.0;
  /// disruption count -> number of jobs with that count.
  std::map<std::uint64_t, std::uint64_t> histogram;
  /// Exact maximum of fair share / allocation over the run (>= 1).
  Frac worst_ratio{1};
  std::string worst_ratio_decimal = "1";
  std::int64_t feasibility_violations = 0;
  std::int64_t approx_violations = 0;
  TimeStep first_violation = -1;
  bool halted = false;
  TimeStep halted_at = -1;
};

struct RunResult {
  AllocationTrace trace;
  DisruptionLedger ledger;
  RunReport report;
};

/// Replays an event stream against one allocator under the weighted
/// proportional fair-share policy, revealing events one at a time.
/// With check_invariants, after every event the referee verifies exact
/// feasibility and the claimed c-approximation against shares w_j/W_t.
RunResult run(const EventStream& events, Allocator& allocator, const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// Multi-resource runs: one base allocator per dimension, a caller
// supplied policy producing per-dimension share maps.
// ---------------------------------------------------------------------------

using MultiSharePolicy =
    std::function<std::vector<ShareMap>(const std::map<JobId, Job>& alive, TimeStep t)>;

struct MultiRunResult {
  std::vector<AllocationTrace> traces;           // one per dimension
  DisruptionLedger ledger;                       // at most one hit per job per event
  std::vector<DisruptionLedger> per_dimension;
  RunReport report;                              // worst ratio across dimensions
};

MultiRunResult run_multidim(const EventStream& events, MultiDimAllocator& allocator,
                            const MultiSharePolicy& policy, const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// splitmix64 of (master, index): stable per-trial seed derivation.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

struct SweepConfig {
  std::string config_id;
  std::function<EventStream(std::uint64_t seed)> instance;
  std::function<std::unique_ptr<Allocator>(std::uint64_t seed)> make_allocator;
  RunOptions options;
};

struct SweepRow {
  std::string config_id;
  std::uint64_t seed = 0;
  std::int64_t n = 0;  // events replayed
  std::int64_t arrivals = 0;
  std::int64_t departures = 0;
  std::uint64_t total_disruptions = 0;
  std::uint64_t max_per_job = 0;
  double mean_per_event = 0.0;
  std::string worst_ratio_decimal = "1";
  bool feasible = true;
  bool failed = false;  // run threw; error holds the message, sweep continues
  std::string error;
};

std::vector<SweepRow> sweep(const std::vector<SweepConfig>& configs, int trials,
                            std::uint64_t master_seed);

}  // namespace fairdyn
