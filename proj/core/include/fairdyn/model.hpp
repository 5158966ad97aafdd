#pragma once

#include "fairdyn/numeric.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairdyn {

using JobId = std::int64_t;
using TimeStep = std::int64_t;

struct Job {
  JobId id = 0;
  BigInt weight{1};
  TimeStep arrival = 0;
  std::optional<TimeStep> departure;
  /// Per-dimension demands (DRF requirements or Cobb-Douglas exponents).
  /// Empty for single-resource instances.
  std::vector<Frac> demands;
  /// Per-dimension integer weights for weight-driven allocators run
  /// one per dimension; empty means `weight` applies in every
  /// dimension.
  std::vector<BigInt> dim_weights;
};

struct Event {
  enum class Kind { Arrival, Departure };
  TimeStep time = 0;
  Kind kind = Kind::Arrival;
  Job job;   // valid for arrivals
  JobId id;  // valid for departures

  static Event arrival(TimeStep t, Job j) {
    Event e;
    e.time = t;
    e.kind = Kind::Arrival;
    e.id = j.id;
    e.job = std::move(j);
    return e;
  }
  static Event departure(TimeStep t, JobId id) {
    Event e;
    e.time = t;
    e.kind = Kind::Departure;
    e.id = id;
    return e;
  }
};

using EventStream = std::vector<Event>;

/// nullopt when the stream is well formed; otherwise a description of
/// the first violation (duplicate id, dangling departure, time
/// regression, nonpositive weight).
std::optional<std::string> validate_event_stream(const EventStream& events);

using ShareMap = std::map<JobId, Frac>;
using AllocMap = std::map<JobId, Frac>;

struct AllocationSnapshot {
  TimeStep time = 0;
  /// job id -> (allocation, fair share)
  std::map<JobId, std::pair<Frac, Frac>> entries;
};

using AllocationTrace = std::vector<AllocationSnapshot>;

/// Per-job record of the time steps at which an allocation value
/// changed after the job's initial (arrival-time) assignment. The
/// initial assignment and the departure itself are not disruptions.
struct DisruptionLedger {
  std::map<JobId, std::vector<TimeStep>> per_job;
  std::uint64_t total = 0;

  void record(JobId id, TimeStep t) {
    per_job[id].push_back(t);
    ++total;
  }
  std::uint64_t count(JobId id) const {
    auto it = per_job.find(id);
    return it == per_job.end() ? 0 : it->second.size();
  }
  std::uint64_t max_per_job() const {
    std::uint64_t m = 0;
    for (const auto& [id, v] : per_job) m = std::max<std::uint64_t>(m, v.size());
    return m;
  }
};

/// Rebuilds a ledger from a trace by diffing consecutive snapshots.
/// Deterministic; used as an independent cross-check of simulator
/// bookkeeping.
DisruptionLedger ledger_from_trace(const AllocationTrace& trace);

/// Fair share policy contract: positive shares summing to at most 1.
class FairSharePolicy {
 public:
  virtual ~FairSharePolicy() = default;
  virtual ShareMap fair_shares(const std::map<JobId, Job>& alive, TimeStep t) = 0;
};

/// Allocation algorithm contract. Implementations own their current
/// allocation map; the returned reference stays valid until the next
/// call. last_changed() lists the jobs whose allocation value changed
/// in the most recent call, excluding a new arrival's initial
/// assignment and a departing job's removal.
class Allocator {
 public:
  virtual ~Allocator() = default;
  virtual const AllocMap& on_arrival(const Job& job, const ShareMap& shares) = 0;
  virtual const AllocMap& on_departure(JobId id, const ShareMap& shares) = 0;
  virtual const AllocMap& on_share_update(const ShareMap& shares) = 0;
  virtual const std::vector<JobId>& last_changed() const = 0;
  /// False for allocators that derive everything from weights and
  /// ignore the share argument; lets the driver skip share
  /// recomputation on large runs.
  virtual bool needs_shares() const { return true; }
};

}  // namespace fairdyn
