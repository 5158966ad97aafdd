#include "fairdyn/adversaries.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fairdyn {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

EventStream geometric_instance(const GeometricInstanceSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("geometric instance needs n >= 1");
  EventStream out;
  out.reserve(static_cast<std::size_t>(spec.n));
  for (std::int64_t i = 1; i <= spec.n; ++i) {
    Job job;
    job.id = i;
    job.weight = BigInt(1) << static_cast<unsigned>(i - 1);
    job.arrival = i;
    out.push_back(Event::arrival(i, std::move(job)));
  }
  return out;
}

EventStream random_permutation_stream(const RandomPermutationSpec& spec) {
  const std::size_t n = spec.weights.size();
  if (n == 0) throw std::invalid_argument("random permutation stream needs >= 1 weight");
  std::mt19937_64 rng(spec.seed);

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i + 1));
    std::swap(perm[i], perm[j]);
  }

  EventStream out;
  for (std::size_t i = 0; i < n; ++i) {
    Job job;
    job.id = static_cast<JobId>(i + 1);
    job.weight = spec.weights[perm[i]];
    job.arrival = static_cast<TimeStep>(i + 1);
    out.push_back(Event::arrival(job.arrival, std::move(job)));
  }

  if (spec.departures == DepartureRule::None) return out;
  std::vector<JobId> order;
  order.reserve(n);
  switch (spec.departures) {
    case DepartureRule::Lifo:
      for (std::size_t i = n; i >= 1; --i) order.push_back(static_cast<JobId>(i));
      break;
    case DepartureRule::Fifo:
      for (std::size_t i = 1; i <= n; ++i) order.push_back(static_cast<JobId>(i));
      break;
    case DepartureRule::RandomAlive: {
      std::vector<JobId> alive;
      for (std::size_t i = 1; i <= n; ++i) alive.push_back(static_cast<JobId>(i));
      while (!alive.empty()) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, alive.size()));
        order.push_back(alive[j]);
        alive[j] = alive.back();
        alive.pop_back();
      }
      break;
    }
    case DepartureRule::None:
      break;
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    out.push_back(Event::departure(static_cast<TimeStep>(n + 1 + i), order[i]));
  return out;
}

namespace {

BigInt ceil_frac(const Frac& f) {
  const BigInt num = frac_num(f);
  const BigInt den = frac_den(f);
  return (num + den - 1) / den;
}

std::vector<std::pair<JobId, BigInt>> alive_vector(const std::map<JobId, BigInt>& alive) {
  return {alive.begin(), alive.end()};
}

/// Referee: every alive job allocated, allocations sum to <= 1, and
/// c * allocation >= fair share for every alive job. Exact.
bool certify_response(const AllocMap& response, const ShareMap& shares, const Frac& c,
                      std::string* reason) {
  Frac sum{0};
  for (const auto& [id, a] : response) {
    if (a <= 0) {
      *reason = "nonpositive allocation for job " + std::to_string(id);
      return false;
    }
    sum += a;
  }
  if (sum > 1) {
    *reason = "allocations sum beyond capacity";
    return false;
  }
  for (const auto& [id, s] : shares) {
    auto it = response.find(id);
    if (it == response.end()) {
      *reason = "missing allocation for job " + std::to_string(id);
      return false;
    }
    if (it->second * c < s) {
      *reason = "allocation below 1/c of fair share for job " + std::to_string(id);
      return false;
    }
  }
  return true;
}

}  // namespace

BatchGameResult batch_adversary_run(const BatchGameConfig& config, Allocator& opponent) {
  if (config.b < 2) throw std::invalid_argument("batch game needs b >= 2");
  if (config.c < 1) throw std::invalid_argument("batch game needs c >= 1");
  if (config.M < 1) throw std::invalid_argument("batch game needs M >= 1");
  const int type_budget = static_cast<int>(4 * ceil_frac(config.c) + 1);
  BigInt divisor{1};
  for (int i = 0; i < type_budget; ++i) divisor *= config.b;
  if (BigInt(config.M) % divisor != 0)
    throw std::invalid_argument("M must be a multiple of b^(4*ceil(c)+1)");

  const std::int64_t a = 2 * config.b;
  BatchGameResult res;
  std::map<JobId, BigInt> alive;
  std::vector<std::size_t> alive_batches;     // indices, ascending type
  std::vector<AllocMap> watermarks;           // parallel to res.batches
  AllocMap prev_allocs;                       // end of previous step
  const AllocMap* current = nullptr;
  JobId next_id = 1;
  TimeStep t = 0;
  int disrupted_k = -1;

  auto current_shares = [&]() {
    return opponent.needs_shares() ? weighted_shares(alive_vector(alive)) : ShareMap{};
  };

  while (true) {
    ++t;
    BatchStepRecord srec;
    srec.time = t;

    if (disrupted_k >= 0) {
      // Phase end: every batch of type > k departs.
      std::vector<std::size_t> staying;
      for (std::size_t bi : alive_batches) {
        auto& batch = res.batches[bi];
        if (batch.type <= disrupted_k) {
          staying.push_back(bi);
          continue;
        }
        batch.departed_at = t;
        for (JobId id : batch.members) {
          alive.erase(id);
          srec.departed.push_back(id);
          current = &opponent.on_departure(id, current_shares());
        }
      }
      alive_batches = std::move(staying);
      srec.phase_end = true;
      ++res.phases;
    } else {
      // Quiet step: the next-higher-type batch arrives.
      const int k = alive_batches.empty() ? 0 : res.batches[alive_batches.back()].type + 1;
      if (k > type_budget)
        throw std::runtime_error("batch adversary exceeded its type budget");
      BigInt scale{1};
      for (int i = 0; i < k; ++i) scale *= config.b;
      const std::int64_t count = static_cast<std::int64_t>(BigInt(config.M) / scale);
      BigInt weight{1};
      for (int i = 0; i < k; ++i) weight *= a;

      BatchRecord brec;
      brec.type = k;
      brec.arrived_at = t;
      for (std::int64_t j = 0; j < count; ++j) {
        Job job;
        job.id = next_id++;
        job.weight = weight;
        job.arrival = t;
        alive[job.id] = weight;
        brec.members.push_back(job.id);
        current = &opponent.on_arrival(job, current_shares());
      }
      res.total_arrivals += count;
      res.max_type = std::max(res.max_type, k);
      srec.arrived_batch = static_cast<int>(res.batches.size());
      alive_batches.push_back(res.batches.size());
      res.batches.push_back(std::move(brec));
      watermarks.emplace_back();
    }

    const ShareMap shares = weighted_shares(alive_vector(alive));
    std::string reason;
    if (!certify_response(*current, shares, config.c, &reason)) {
      res.certified = false;
      res.failure_reason = reason;
      res.failure_time = t;
      res.steps.push_back(std::move(srec));
      break;
    }

    // Disruptions at step granularity: value at end of step differs
    // from value at end of the previous step.
    for (const auto& [id, alloc] : *current) {
      auto it = prev_allocs.find(id);
      if (it != prev_allocs.end() && it->second != alloc) res.ledger.record(id, t);
    }
    prev_allocs = *current;

    // Smallest disrupted type: >= half of a batch's members moved away
    // from the watermark taken when its type was last on top.
    disrupted_k = -1;
    for (std::size_t bi : alive_batches) {
      const auto& batch = res.batches[bi];
      const auto& mark = watermarks[bi];
      if (mark.empty()) continue;  // arrived this step; no epoch yet
      std::size_t moved = 0;
      for (JobId id : batch.members) {
        auto now = current->find(id);
        auto then = mark.find(id);
        if (now == current->end() || then == mark.end() || now->second != then->second) ++moved;
      }
      if (2 * moved >= batch.members.size()) {
        disrupted_k = batch.type;
        srec.disrupted_type = batch.type;
        break;
      }
    }

    // The highest alive type starts (or continues) its epoch now.
    if (!alive_batches.empty()) {
      const std::size_t top = alive_batches.back();
      AllocMap mark;
      for (JobId id : res.batches[top].members) {
        auto it = current->find(id);
        if (it != current->end()) mark.emplace(id, it->second);
      }
      watermarks[top] = std::move(mark);
    }

    AllocationSnapshot snap;
    snap.time = t;
    for (const auto& [id, alloc] : *current) snap.entries.emplace(id, std::make_pair(alloc, shares.at(id)));
    res.trace.push_back(std::move(snap));
    const bool ended_phase = srec.phase_end;
    res.steps.push_back(std::move(srec));

    if (ended_phase && res.total_arrivals >= 3 * config.M) break;
  }
  return res;
}

MonotoneGameResult monotone_adversary_run(std::int64_t n, const Frac& c, Allocator& opponent) {
  if (n < 1) throw std::invalid_argument("monotone game needs n >= 1");
  if (c < 2) throw std::invalid_argument("monotone game needs c >= 2 to keep shares feasible");

  MonotoneGameResult res;
  MonotoneAdversaryState state;
  state.c = c;
  const Frac new_share = Frac(frac_den(c), frac_num(c));  // 1/c
  bool pending = false;
  const AllocMap* current = nullptr;

  for (std::int64_t i = 1; i <= n; ++i) {
    const TimeStep t = i;
    if (pending) {
      // Reveal the share cuts decided after the previous response.
      current = &opponent.on_share_update(state.imposed);
      for (JobId id : opponent.last_changed()) res.ledger.record(id, t);
      std::vector<JobId> updated;
      const Certification cert = monotone_adversary_step(state, *current, &updated);
      if (!cert.ok) {
        res.certified = false;
        res.failure_reason = cert.reason;
        res.failure_time = t;
        break;
      }
    }

    Job job;
    job.id = i;
    job.weight = 1;
    job.arrival = t;
    state.imposed[job.id] = new_share;
    current = &opponent.on_arrival(job, state.imposed);
    for (JobId id : opponent.last_changed()) res.ledger.record(id, t);
    std::vector<JobId> updated;
    const Certification cert = monotone_adversary_step(state, *current, &updated);
    if (!cert.ok) {
      res.certified = false;
      res.failure_reason = cert.reason;
      res.failure_time = t;
      break;
    }
    pending = !updated.empty();
  }

  res.final_imposed = state.imposed;
  if (current) res.final_alloc = *current;
  if (!res.certified) return res;

  // Bound bookkeeping: floor(log_c n), the per-job disruption target
  // ceil((log_c n - 3)/2), and the floor(n/c) head count.
  std::int64_t log_floor = 0;
  Frac power{1};
  while (power * c <= n) {
    power *= c;
    ++log_floor;
  }
  res.required_disruptions = log_floor > 3 ? (log_floor - 2) / 2 : 0;
  res.target_job_count =
      static_cast<std::int64_t>(BigInt(BigInt(n) * frac_den(c) / frac_num(c)));

  const Frac low_threshold = c / Frac(n);
  for (const auto& [id, share] : res.final_imposed) {
    if (share > low_threshold) continue;
    ++res.low_share_jobs;
    if (static_cast<std::int64_t>(res.ledger.count(id)) >= res.required_disruptions)
      ++res.low_share_meeting_target;
  }
  res.bound_holds = res.low_share_meeting_target >= res.target_job_count;
  return res;
}

}  // namespace fairdyn
