#include "fairdyn/simulator.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fairdyn {

namespace {

std::int64_t bit_length(const BigInt& v) {
  return v == 0 ? 0 : floor_log2(v) + 1;
}

/// Running maximum of an exact ratio kept as an unreduced num/den
/// pair; candidates are rejected on bit length alone when possible so
/// the exact cross-multiplication runs rarely.
struct RatioMax {
  BigInt num{1};
  BigInt den{1};

  void offer(const BigInt& cand_num, const BigInt& cand_den) {
    if (cand_den == 0) return;  // zero allocation; flagged as a violation elsewhere
    const std::int64_t upper = bit_length(cand_num) - bit_length(cand_den) + 1;
    const std::int64_t lower = bit_length(num) - 1 - bit_length(den);
    if (upper <= lower) return;
    if (cand_num * den > num * cand_den) {
      num = cand_num;
      den = cand_den;
    }
  }
  Frac value() const { return Frac(num, den); }
};

struct JobStats {
  std::vector<JobId> seen;  // every arrived job id, in arrival order
};

/// Exact running sum of rationals kept as an unreduced num/den pair.
/// Additions sharing the current denominator are plain integer adds;
/// mixed denominators pay one cross-multiply and an immediate
/// reduction, which keeps the pair near lowest terms. The referee's
/// per-event updates almost always share one denominator (the current
/// total weight), so the mixed path runs O(1) times per event.
struct RawSum {
  BigInt num{0};
  BigInt den{1};

  void add(const Frac& f) { accumulate(f, false); }
  void sub(const Frac& f) { accumulate(f, true); }
  bool exceeds_one() const { return num > den; }

 private:
  void accumulate(const Frac& f, bool negate) {
    const BigInt b = frac_den(f);
    BigInt a = frac_num(f);
    if (negate) a = -a;
    if (b == den) {
      num += a;
      return;
    }
    num = num * b + a * den;
    den *= b;
    if (num == 0) {
      den = 1;
      return;
    }
    const BigInt g = boost::multiprecision::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
};

void finish_report(RunReport& report, const DisruptionLedger& ledger, const JobStats& stats,
                   const RatioMax& worst, bool tracked_ratio) {
  report.total_disruptions = ledger.total;
  const std::int64_t events = report.arrivals + report.departures;
  report.mean_per_event = events == 0 ? 0.0 : static_cast<double>(ledger.total) / events;
  report.mean_per_job =
      stats.seen.empty() ? 0.0 : static_cast<double>(ledger.total) / stats.seen.size();
  bool first = true;
  for (JobId id : stats.seen) {
    const std::uint64_t c = ledger.count(id);
    ++report.histogram[c];
    report.min_per_job = first ? c : std::min(report.min_per_job, c);
    report.max_per_job = first ? c : std::max(report.max_per_job, c);
    first = false;
  }
  if (tracked_ratio) {
    report.worst_ratio = worst.value();
    report.worst_ratio_decimal = decimal_string(report.worst_ratio);
  }
}

}  // namespace

RunResult run(const EventStream& events, Allocator& allocator, const RunOptions& opts) {
  if (auto problem = validate_event_stream(events))
    throw std::invalid_argument("invalid event stream: " + *problem);
  if (opts.claimed_c < 1) throw std::invalid_argument("claimed c must be >= 1");

  RunResult result;
  RunReport& report = result.report;
  JobStats stats;
  RatioMax worst;

  std::map<JobId, BigInt> alive;
  BigInt total_weight{0};
  AllocMap mirror;   // our own copy of the allocator's current map
  RawSum alloc_sum;

  // share_j / alloc_j = (w_j * a_den) / (a_num * W): the job-dependent
  // part w_j*a_den/a_num is kept in an ordered multiset updated only
  // when a job arrives, departs or is disrupted, so each step compares
  // just the maximum against c * W.
  using RatioKey = std::pair<BigInt, BigInt>;  // lowest-terms num/den
  const auto ratio_less = [](const RatioKey& a, const RatioKey& b) {
    // A zero denominator encodes a zero allocation: infinite ratio.
    const bool a_inf = a.second == 0;
    const bool b_inf = b.second == 0;
    if (a_inf || b_inf) return !a_inf && b_inf;
    // log2 bounds decide all comparisons except near-ties.
    const std::int64_t la = bit_length(a.first) - bit_length(a.second);
    const std::int64_t lb = bit_length(b.first) - bit_length(b.second);
    if (la < lb - 1) return true;
    if (lb < la - 1) return false;
    return a.first * b.second < b.first * a.second;
  };
  std::multiset<RatioKey, decltype(ratio_less)> ratio_keys(ratio_less);
  std::map<JobId, std::multiset<RatioKey, decltype(ratio_less)>::iterator> ratio_of;
  const auto set_ratio_key = [&](JobId id, const BigInt& w, const Frac& a) {
    auto it = ratio_of.find(id);
    if (it != ratio_of.end()) ratio_keys.erase(it->second);
    // Reduce the key: gcd(w * a_den, a_num) = gcd(w, a_num) because
    // a is in lowest terms. After reduction the denominator is 1 for
    // the common case a_num | w, making comparator multiplies cheap.
    BigInt kn = w;
    BigInt kd = frac_num(a);
    if (kd == 0) {
      auto pos = ratio_keys.emplace(BigInt(1), BigInt(0));
      if (it != ratio_of.end())
        it->second = pos;
      else
        ratio_of.emplace(id, pos);
      return;
    }
    if (is_pow2(w)) {
      const std::int64_t s = std::min(lowest_set_bit(w), lowest_set_bit(kd));
      if (s > 0) {
        kn >>= static_cast<unsigned>(s);
        kd >>= static_cast<unsigned>(s);
      }
    } else {
      const BigInt g = boost::multiprecision::gcd(kn, kd);
      if (g > 1) {
        kn /= g;
        kd /= g;
      }
    }
    auto pos = ratio_keys.emplace(kn * frac_den(a), std::move(kd));
    if (it != ratio_of.end())
      it->second = pos;
    else
      ratio_of.emplace(id, pos);
  };
  const auto drop_ratio_key = [&](JobId id) {
    auto it = ratio_of.find(id);
    if (it != ratio_of.end()) {
      ratio_keys.erase(it->second);
      ratio_of.erase(it);
    }
  };
  const bool needs_shares = allocator.needs_shares();
  const bool track = opts.check_invariants;
  const BigInt c_num = frac_num(opts.claimed_c);
  const BigInt c_den = frac_den(opts.claimed_c);

  for (const Event& ev : events) {
    const TimeStep t = ev.time;
    const AllocMap* current = nullptr;

    if (ev.kind == Event::Kind::Arrival) {
      alive.emplace(ev.job.id, ev.job.weight);
      total_weight += ev.job.weight;
      stats.seen.push_back(ev.job.id);
      ++report.arrivals;
      ShareMap shares;
      if (needs_shares || opts.capture_trace)
        shares = weighted_shares({alive.begin(), alive.end()});
      current = &allocator.on_arrival(ev.job, shares);
    } else {
      auto it = alive.find(ev.id);
      total_weight -= it->second;
      alive.erase(it);
      ++report.departures;
      ShareMap shares;
      if ((needs_shares || opts.capture_trace) && !alive.empty())
        shares = weighted_shares({alive.begin(), alive.end()});
      current = &allocator.on_departure(ev.id, shares);
    }

    for (JobId id : allocator.last_changed()) result.ledger.record(id, t);

    if (track || opts.capture_trace) {
      // Maintain the mirror and the incremental allocation sum.
      if (ev.kind == Event::Kind::Departure) {
        auto it = mirror.find(ev.id);
        if (it != mirror.end()) {
          alloc_sum.sub(it->second);
          mirror.erase(it);
        }
      }
      // Two passes so each pass works in a single denominator: the
      // outgoing values share the previous step's, the incoming values
      // the current step's.
      for (JobId id : allocator.last_changed()) alloc_sum.sub(mirror.at(id));
      for (JobId id : allocator.last_changed()) {
        const Frac& now = current->at(id);
        alloc_sum.add(now);
        mirror.at(id) = now;
      }
      if (ev.kind == Event::Kind::Arrival) {
        auto it = current->find(ev.job.id);
        if (it == current->end())
          throw std::logic_error("allocator returned no allocation for the arriving job");
        mirror.emplace(ev.job.id, it->second);
        alloc_sum.add(it->second);
      }
    }

    if (track) {
      bool violated = false;
      if (alloc_sum.exceeds_one()) {
        ++report.feasibility_violations;
        violated = true;
      }
      if (ev.kind == Event::Kind::Departure) drop_ratio_key(ev.id);
      if (ev.kind == Event::Kind::Arrival)
        set_ratio_key(ev.job.id, ev.job.weight, mirror.at(ev.job.id));
      for (JobId id : allocator.last_changed()) set_ratio_key(id, alive.at(id), mirror.at(id));
      if (!ratio_keys.empty()) {
        // share/alloc <= c  <=>  w_j * a_den * c_den <= c_num * a_num * W.
        const RatioKey& top = *ratio_keys.rbegin();
        const BigInt den = top.second * total_weight;
        if (top.first * c_den > c_num * den) {
          ++report.approx_violations;
          violated = true;
        }
        worst.offer(top.first, den);
      }
      if (violated) {
        if (report.first_violation < 0) report.first_violation = t;
        if (opts.strictness == Strictness::Halt) {
          report.halted = true;
          report.halted_at = t;
          break;
        }
      }
    }

    if (opts.capture_trace) {
      AllocationSnapshot snap;
      snap.time = t;
      for (const auto& [id, w] : alive)
        snap.entries.emplace(id, std::make_pair(mirror.at(id), make_frac(w, total_weight)));
      result.trace.push_back(std::move(snap));
    }
  }

  finish_report(report, result.ledger, stats, worst, track);
  return result;
}

MultiRunResult run_multidim(const EventStream& events, MultiDimAllocator& allocator,
                            const MultiSharePolicy& policy, const RunOptions& opts) {
  if (auto problem = validate_event_stream(events))
    throw std::invalid_argument("invalid event stream: " + *problem);
  const int dims = allocator.dimensions();

  MultiRunResult result;
  result.per_dimension.resize(static_cast<std::size_t>(dims));
  result.traces.resize(static_cast<std::size_t>(dims));
  RunReport& report = result.report;
  JobStats stats;
  RatioMax worst;

  std::map<JobId, Job> alive;

  for (const Event& ev : events) {
    const TimeStep t = ev.time;
    std::vector<ShareMap> shares;

    if (ev.kind == Event::Kind::Arrival) {
      alive.emplace(ev.job.id, ev.job);
      stats.seen.push_back(ev.job.id);
      ++report.arrivals;
      shares = policy(alive, t);
      allocator.on_arrival(ev.job, shares);
    } else {
      alive.erase(ev.id);
      ++report.departures;
      shares = alive.empty() ? std::vector<ShareMap>(static_cast<std::size_t>(dims))
                             : policy(alive, t);
      allocator.on_departure(ev.id, shares);
    }

    for (JobId id : allocator.last_changed()) result.ledger.record(id, t);
    for (int d = 0; d < dims; ++d)
      for (JobId id : allocator.last_changed_in(d))
        result.per_dimension[static_cast<std::size_t>(d)].record(id, t);

    if (opts.check_invariants) {
      bool violated = false;
      for (int d = 0; d < dims; ++d) {
        const AllocMap& dim_alloc = allocator.allocation(d);
        Frac sum{0};
        for (const auto& [id, a] : dim_alloc) sum += a;
        if (sum > 1) {
          ++report.feasibility_violations;
          violated = true;
        }
        for (const auto& [id, s] : shares[static_cast<std::size_t>(d)]) {
          const Frac& a = dim_alloc.at(id);
          if (s > opts.claimed_c * a) {
            ++report.approx_violations;
            violated = true;
          }
          worst.offer(frac_num(s) * frac_den(a), frac_den(s) * frac_num(a));
        }
      }
      if (violated) {
        if (report.first_violation < 0) report.first_violation = t;
        if (opts.strictness == Strictness::Halt) {
          report.halted = true;
          report.halted_at = t;
          break;
        }
      }
    }

    if (opts.capture_trace) {
      for (int d = 0; d < dims; ++d) {
        AllocationSnapshot snap;
        snap.time = t;
        const auto& dim_shares = shares[static_cast<std::size_t>(d)];
        for (const auto& [id, a] : allocator.allocation(d))
          snap.entries.emplace(id, std::make_pair(a, dim_shares.at(id)));
        result.traces[static_cast<std::size_t>(d)].push_back(std::move(snap));
      }
    }
  }

  finish_report(report, result.ledger, stats, worst, opts.check_invariants);
  return result;
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<SweepRow> sweep(const std::vector<SweepConfig>& configs, int trials,
                            std::uint64_t master_seed) {
  if (trials < 1) throw std::invalid_argument("sweep needs >= 1 trial");
  std::vector<SweepRow> rows;
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    const SweepConfig& cfg = configs[ci];
    for (int trial = 0; trial < trials; ++trial) {
      const std::uint64_t seed =
          mix_seed(master_seed, ci * static_cast<std::uint64_t>(trials) + trial);
      SweepRow row;
      row.config_id = cfg.config_id;
      row.seed = seed;
      try {
        const EventStream events = cfg.instance(seed);
        auto allocator = cfg.make_allocator(seed);
        const RunResult res = run(events, *allocator, cfg.options);
        row.n = static_cast<std::int64_t>(events.size());
        row.arrivals = res.report.arrivals;
        row.departures = res.report.departures;
        row.total_disruptions = res.report.total_disruptions;
        row.max_per_job = res.report.max_per_job;
        row.mean_per_event = res.report.mean_per_event;
        row.worst_ratio_decimal = res.report.worst_ratio_decimal;
        row.feasible = res.report.feasibility_violations == 0;
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace fairdyn
