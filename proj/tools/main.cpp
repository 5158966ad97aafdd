// fairdyn: instance generation, simulation runs, adversary games and
// sweeps over dynamic fair-allocation algorithms, with exact-rational
// verification of feasibility, approximation ratios and disruption
// counts.
//
// Exit codes: 0 clean; 1 usage/validation error; 2 invariant violation
// in strict mode; 3 adversary certification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include "fairdyn/adversaries.hpp"
#include "fairdyn/allocators.hpp"
#include "fairdyn/io.hpp"
#include "fairdyn/policies.hpp"
#include "fairdyn/simulator.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace {

using namespace fairdyn;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitCertification = 3;

/// Relative report paths land in $FAIRDYN_REPORT_DIR when it is set.
std::string report_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("FAIRDYN_REPORT_DIR");
  if (!dir || !*dir) return path;
  std::string out = dir;
  if (out.back() != '/') out += '/';
  return out + path;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<BigInt> read_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read weights file " + path);
  std::vector<BigInt> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    out.emplace_back(line.substr(begin, end - begin + 1));
  }
  if (out.empty()) throw std::runtime_error("weights file " + path + " has no weights");
  return out;
}

DepartureRule parse_departure_rule(const std::string& s) {
  if (s == "none") return DepartureRule::None;
  if (s == "random") return DepartureRule::RandomAlive;
  if (s == "lifo") return DepartureRule::Lifo;
  if (s == "fifo") return DepartureRule::Fifo;
  throw CLI::ValidationError("--departures must be none|random|lifo|fifo");
}

struct InstanceSummary {
  std::size_t events;
  std::size_t arrivals;
  std::int64_t weight_bits;
};

InstanceSummary summarize(const EventStream& events) {
  InstanceSummary s{events.size(), 0, 0};
  BigInt total{0};
  for (const Event& ev : events)
    if (ev.kind == Event::Kind::Arrival) {
      ++s.arrivals;
      total += ev.job.weight;
    }
  s.weight_bits = total == 0 ? 0 : floor_log2(total) + 1;
  return s;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

int cmd_gen(const std::string& kind, std::int64_t n, const std::string& weights_file,
            std::uint64_t seed, const std::string& departures, std::int64_t M, std::int64_t b,
            const std::string& c, const std::string& out_path) {
  if (kind == "batch") {
    // The batch adversary is adaptive; gen emits a game config, not a
    // static stream.
    const Frac cf = parse_fraction(c);
    BatchGameConfig config{M, b, cf};
    if (config.b < 2 || config.c < 1 || config.M < 1)
      throw CLI::ValidationError("batch needs M >= 1, b >= 2, c >= 1");
    BigInt divisor{1};
    const int budget = static_cast<int>(4 * ((frac_num(cf) + frac_den(cf) - 1) / frac_den(cf)) + 1);
    for (int i = 0; i < budget; ++i) divisor *= b;
    if (BigInt(M) % divisor != 0)
      throw CLI::ValidationError("M must be a multiple of b^(4*ceil(c)+1)");
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["adversary"] = "batch";
    j["M"] = M;
    j["b"] = b;
    j["c"] = fraction_string(cf);
    write_file(report_path(out_path), j.dump(2) + "\n");
    std::cout << "batch game config: M=" << M << " b=" << b << " c=" << fraction_string(cf)
              << "\n";
    return kExitOk;
  }

  EventStream events;
  if (kind == "geometric") {
    events = geometric_instance({n});
  } else if (kind == "randperm") {
    RandomPermutationSpec spec;
    spec.weights = read_weights_file(weights_file);
    spec.seed = seed;
    spec.departures = parse_departure_rule(departures);
    events = random_permutation_stream(spec);
  } else {
    throw CLI::ValidationError("kind must be geometric|randperm|batch");
  }

  std::ostringstream buf;
  write_instance_jsonl(events, buf);
  write_file(report_path(out_path), buf.str());
  const InstanceSummary s = summarize(events);
  std::cout << "events=" << s.events << " arrivals=" << s.arrivals
            << " total_weight_bits=" << s.weight_bits << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

EventStream inline_instance(const std::string& spec, std::uint64_t seed) {
  // "geometric:N" or "randperm:w1,w2,...[:departures]"
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--gen expects kind:parameters");
  const std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "geometric") return geometric_instance({std::stoll(rest)});
  if (kind == "randperm") {
    RandomPermutationSpec rspec;
    rspec.seed = seed;
    rspec.departures = DepartureRule::None;
    const auto second = rest.find(':');
    if (second != std::string::npos) {
      rspec.departures = parse_departure_rule(rest.substr(second + 1));
      rest = rest.substr(0, second);
    }
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) rspec.weights.emplace_back(item);
    if (rspec.weights.empty()) throw CLI::ValidationError("--gen randperm needs weights");
    return random_permutation_stream(rspec);
  }
  throw CLI::ValidationError("--gen kind must be geometric or randperm");
}

std::unique_ptr<Allocator> make_allocator(const std::string& kind, std::uint64_t seed,
                                          const Frac& epsilon, std::int64_t declared_n,
                                          Frac* claimed_c) {
  if (kind == "exact") {
    *claimed_c = 1;
    return std::make_unique<ExactAllocator>();
  }
  if (kind == "logstar") {
    *claimed_c = 24;
    return std::make_unique<LogStarAllocator>();
  }
  if (kind == "threshold") {
    *claimed_c = 4;
    return std::make_unique<ThresholdResetAllocator>(seed);
  }
  if (kind == "lightheavy") {
    *claimed_c = 1 + epsilon;
    return std::make_unique<LightHeavyAllocator>(epsilon, std::max<std::int64_t>(1, declared_n));
  }
  throw CLI::ValidationError("--alloc must be exact|logstar|threshold|lightheavy");
}

std::string trace_jsonl(const AllocationTrace& trace, int dimension = -1) {
  std::ostringstream out;
  for (const AllocationSnapshot& snap : trace)
    for (const auto& [id, entry] : snap.entries) {
      nlohmann::ordered_json j;
      j["t"] = snap.time;
      if (dimension >= 0) j["dim"] = dimension;
      j["id"] = id;
      j["alloc"] = fraction_string(entry.first);
      j["share"] = fraction_string(entry.second);
      out << j.dump() << '\n';
    }
  return out.str();
}

int cmd_run(const std::string& alloc, const std::string& policy, const std::string& instance_file,
            const std::string& gen_spec, const std::string& epsilon_str,
            std::optional<std::uint64_t> seed_opt, bool strict, const std::string& claimed_str,
            const std::string& report_file, const std::string& trace_file) {
  const auto started = std::chrono::steady_clock::now();
  const std::uint64_t seed = seed_opt ? *seed_opt : entropy_seed();

  EventStream events;
  if (!instance_file.empty()) {
    std::ifstream in(instance_file);
    if (!in) throw CLI::ValidationError("cannot read instance " + instance_file);
    events = read_instance_jsonl(in);
  } else if (!gen_spec.empty()) {
    events = inline_instance(gen_spec, seed);
  } else {
    throw CLI::ValidationError("one of --instance or --gen is required");
  }

  bool has_departures = false;
  std::int64_t arrivals = 0;
  std::size_t max_demands = 0;
  for (const Event& ev : events) {
    if (ev.kind == Event::Kind::Departure) has_departures = true;
    if (ev.kind == Event::Kind::Arrival) {
      ++arrivals;
      max_demands = std::max(max_demands, ev.job.demands.size());
    }
  }
  if (alloc == "logstar" && has_departures)
    throw CLI::ValidationError("the logstar allocator supports arrival-only streams");
  if (alloc == "lightheavy" && has_departures)
    throw CLI::ValidationError("lightheavy requires a monotone (arrival-only) stream");

  const Frac epsilon = parse_fraction(epsilon_str);
  RunOptions opts;
  opts.strictness = strict ? Strictness::Halt : Strictness::Record;
  opts.capture_trace = !trace_file.empty();

  std::map<std::string, std::string> echo{
      {"alloc", alloc},
      {"policy", policy},
      {"instance", instance_file.empty() ? "gen:" + gen_spec : instance_file},
      {"seed", std::to_string(seed)},
      {"epsilon", fraction_string(epsilon)},
      {"strict", strict ? "1" : "0"},
  };

  RunReport report;
  std::string trace_payload;

  // Optional override of the allocator's truthful approximation claim,
  // so a stricter (or wrong) claim can be checked against a run.
  const bool claim_override = !claimed_str.empty();
  if (claim_override) echo["claimed_c"] = fraction_string(parse_fraction(claimed_str));

  if (policy == "weighted") {
    auto allocator = make_allocator(alloc, seed, epsilon, arrivals, &opts.claimed_c);
    if (claim_override) opts.claimed_c = parse_fraction(claimed_str);
    RunResult res = run(events, *allocator, opts);
    report = res.report;
    if (opts.capture_trace) trace_payload = trace_jsonl(res.trace);
  } else if (policy == "cobbdouglas" || policy == "drf") {
    if (max_demands < 1)
      throw CLI::ValidationError(policy + " needs per-dimension demands in the instance");
    const int dims = static_cast<int>(max_demands);
    if (policy == "cobbdouglas" && (alloc == "logstar" || alloc == "threshold")) {
      // Weight-driven allocators need integer per-dimension weights:
      // scale every exponent by the common denominator of the whole
      // instance (instance data, not future information).
      BigInt scale{1};
      for (Event& ev : events)
        if (ev.kind == Event::Kind::Arrival)
          for (const Frac& d : ev.job.demands)
            scale = boost::multiprecision::lcm(scale, frac_den(d));
      for (Event& ev : events)
        if (ev.kind == Event::Kind::Arrival) {
          for (const Frac& d : ev.job.demands) {
            const Frac scaled = d * Frac(scale);
            ev.job.dim_weights.push_back(frac_num(scaled));
          }
        }
    }
    AllocatorFactory factory = [&]() {
      Frac ignored;
      return make_allocator(alloc, seed, epsilon, arrivals, &ignored);
    };
    {
      Frac probe;
      make_allocator(alloc, seed, epsilon, arrivals, &probe);
      opts.claimed_c = probe;
    }
    if (claim_override) opts.claimed_c = parse_fraction(claimed_str);
    MultiDimAllocator multi(factory, dims);
    MultiSharePolicy share_policy;
    if (policy == "cobbdouglas") {
      share_policy = [dims](const std::map<JobId, Job>& alive, TimeStep) {
        CobbDouglasProfile profile;
        profile.dimensions = dims;
        std::vector<JobId> ids;
        for (const auto& [id, job] : alive) {
          profile.add(id, job.demands);
          ids.push_back(id);
        }
        return cobb_douglas_shares(profile, ids);
      };
    } else {
      share_policy = [dims](const std::map<JobId, Job>& alive, TimeStep) {
        DrfProfile profile;
        profile.dimensions = dims;
        std::vector<JobId> ids;
        for (const auto& [id, job] : alive) {
          profile.add(id, job.weight, job.demands);
          ids.push_back(id);
        }
        return drf_shares(profile, ids).per_dimension;
      };
    }
    MultiRunResult res = run_multidim(events, multi, share_policy, opts);
    report = res.report;
    if (opts.capture_trace)
      for (int d = 0; d < dims; ++d)
        trace_payload += trace_jsonl(res.traces[static_cast<std::size_t>(d)], d);
  } else {
    throw CLI::ValidationError("--policy must be weighted|cobbdouglas|drf");
  }

  if (!report_file.empty()) write_file(report_path(report_file), report_json(echo, report));
  if (!trace_file.empty()) write_file(report_path(trace_file), trace_payload);

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  std::cerr << "wall_time_ms=" << elapsed.count() << "\n";
  std::cout << "arrivals=" << report.arrivals << " departures=" << report.departures
            << " total_disruptions=" << report.total_disruptions
            << " max_per_job=" << report.max_per_job
            << " worst_ratio=" << report.worst_ratio_decimal
            << " violations=" << report.feasibility_violations + report.approx_violations << "\n";

  const bool violated = report.feasibility_violations > 0 || report.approx_violations > 0;
  return strict && violated ? kExitViolation : kExitOk;
}

// ---------------------------------------------------------------------------
// game
// ---------------------------------------------------------------------------

int cmd_game(const std::string& adversary, const std::string& opponent, std::int64_t M,
             std::int64_t b, const std::string& c_str, std::int64_t n,
             const std::string& epsilon_str, std::uint64_t seed, const std::string& report_file) {
  const Frac c = parse_fraction(c_str);
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["adversary"] = adversary;
  j["opponent"] = opponent;

  int exit_code = kExitOk;
  if (adversary == "batch") {
    std::unique_ptr<Allocator> opp;
    if (opponent == "exact")
      opp = std::make_unique<ExactAllocator>();
    else if (opponent == "threshold")
      opp = std::make_unique<ThresholdResetAllocator>(seed);
    else
      throw CLI::ValidationError("batch opponents: exact|threshold");
    BatchGameConfig config{M, b, c};
    BatchGameResult res = [&] {
      try {
        return batch_adversary_run(config, *opp);
      } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError(e.what());
      }
    }();
    j["M"] = M;
    j["b"] = b;
    j["c"] = fraction_string(c);
    j["certified"] = res.certified;
    j["failure_reason"] = res.failure_reason;
    j["failure_time"] = res.failure_time;
    j["total_arrivals"] = res.total_arrivals;
    j["phases"] = res.phases;
    j["max_type"] = res.max_type;
    j["total_disruptions"] = res.ledger.total;
    j["max_per_job"] = res.ledger.max_per_job();
    if (!res.certified) exit_code = kExitCertification;
  } else if (adversary == "monotone") {
    std::unique_ptr<Allocator> opp;
    if (opponent == "exact")
      opp = std::make_unique<ExactAllocator>();
    else if (opponent == "lightheavy") {
      const Frac epsilon = epsilon_str.empty() ? c - 1 : parse_fraction(epsilon_str);
      opp = std::make_unique<LightHeavyAllocator>(epsilon, n);
    } else {
      throw CLI::ValidationError("monotone opponents: exact|lightheavy");
    }
    MonotoneGameResult res = [&] {
      try {
        return monotone_adversary_run(n, c, *opp);
      } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError(e.what());
      }
    }();
    j["n"] = n;
    j["c"] = fraction_string(c);
    j["certified"] = res.certified;
    j["failure_reason"] = res.failure_reason;
    j["failure_time"] = res.failure_time;
    j["total_disruptions"] = res.ledger.total;
    j["max_per_job"] = res.ledger.max_per_job();
    j["required_disruptions"] = res.required_disruptions;
    j["low_share_jobs"] = res.low_share_jobs;
    j["low_share_meeting_target"] = res.low_share_meeting_target;
    j["target_job_count"] = res.target_job_count;
    j["bound_holds"] = res.bound_holds;
    if (!res.certified) exit_code = kExitCertification;
  } else {
    throw CLI::ValidationError("--adversary must be batch or monotone");
  }

  if (!report_file.empty()) write_file(report_path(report_file), j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return exit_code;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const std::string& config_file, const std::string& out_file) {
  std::ifstream in(config_file);
  if (!in) throw CLI::ValidationError("cannot read sweep config " + config_file);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw CLI::ValidationError(std::string("sweep config: ") + e.what());
  }

  std::vector<SweepConfig> configs;
  try {
    const std::uint64_t master_seed = cfg.at("master_seed").get<std::uint64_t>();
    const int trials = cfg.at("trials").get<int>();
    for (const auto& c : cfg.at("configs")) {
      SweepConfig sc;
      sc.config_id = c.at("id").get<std::string>();
      const auto& inst = c.at("instance");
      const std::string kind = inst.at("kind").get<std::string>();
      if (kind == "geometric") {
        const std::int64_t n = inst.at("n").get<std::int64_t>();
        sc.instance = [n](std::uint64_t) { return geometric_instance({n}); };
      } else if (kind == "randperm") {
        std::vector<BigInt> weights;
        if (inst.contains("weights")) {
          for (const auto& w : inst.at("weights"))
            weights.emplace_back(w.is_string() ? BigInt(w.get<std::string>())
                                               : BigInt(w.get<std::int64_t>()));
        } else {
          // Compact form: weights 2^0..2^{pow2_values-1}, each repeated.
          const int values = inst.at("pow2_values").get<int>();
          const int repeat = inst.at("repeat").get<int>();
          for (int v = 0; v < values; ++v)
            for (int r = 0; r < repeat; ++r) weights.push_back(BigInt(1) << v);
        }
        const DepartureRule rule = parse_departure_rule(
            inst.contains("departures") ? inst.at("departures").get<std::string>() : "none");
        sc.instance = [weights, rule](std::uint64_t seed) {
          RandomPermutationSpec spec;
          spec.weights = weights;
          spec.seed = seed;
          spec.departures = rule;
          return random_permutation_stream(spec);
        };
      } else {
        throw std::runtime_error("instance kind must be geometric or randperm");
      }

      const auto& alloc = c.at("alloc");
      const std::string alloc_kind = alloc.at("kind").get<std::string>();
      const Frac epsilon =
          alloc.contains("epsilon") ? parse_fraction(alloc.at("epsilon").get<std::string>()) : Frac(1);
      const std::int64_t declared_n =
          alloc.contains("n") ? alloc.at("n").get<std::int64_t>() : 1;
      sc.make_allocator = [alloc_kind, epsilon, declared_n](std::uint64_t seed) {
        Frac ignored;
        return make_allocator(alloc_kind, seed, epsilon, declared_n, &ignored);
      };
      {
        Frac claimed;
        make_allocator(alloc_kind, 0, epsilon, declared_n, &claimed);
        sc.options.claimed_c = claimed;
      }
      if (c.contains("claimed_c"))
        sc.options.claimed_c = parse_fraction(c.at("claimed_c").get<std::string>());
      sc.options.strictness = Strictness::Record;
      sc.options.check_invariants =
          !c.contains("check") || c.at("check").get<bool>();
      configs.push_back(std::move(sc));
    }

    const std::vector<SweepRow> rows = sweep(configs, trials, master_seed);
    std::string csv = "# master_seed=" + std::to_string(master_seed) + "\n" + sweep_csv(rows);
    write_file(report_path(out_file), csv);
    for (const SweepRow& row : rows)
      if (row.failed)
        std::cerr << "trial failed: config=" << row.config_id << " seed=" << row.seed << ": "
                  << row.error << "\n";
    std::cout << "rows=" << rows.size() << "\n";
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ValidationError(std::string("sweep config: ") + e.what());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic weighted fair allocation: simulation, verification and adversary games"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance file (or a batch game config)");
  std::string gen_kind, gen_weights_file, gen_departures = "none", gen_c = "1", gen_out;
  std::int64_t gen_n = 1, gen_M = 0, gen_b = 2;
  std::uint64_t gen_seed = 0;
  gen->add_option("kind", gen_kind, "geometric|randperm|batch")->required();
  gen->add_option("--n", gen_n, "job count (geometric)");
  gen->add_option("--weights-file", gen_weights_file, "one decimal weight per line (randperm)");
  gen->add_option("--seed", gen_seed, "RNG seed (randperm)");
  gen->add_option("--departures", gen_departures, "none|random|lifo|fifo (randperm)");
  gen->add_option("--M", gen_M, "base batch size (batch)");
  gen->add_option("--b", gen_b, "batch divisor (batch)");
  gen->add_option("--c", gen_c, "opponent approximation claim (batch)");
  gen->add_option("--out", gen_out, "output path")->required();

  // run
  auto* runc = app.add_subcommand("run", "Replay an instance against an allocator");
  std::string run_alloc, run_policy = "weighted", run_instance, run_gen, run_epsilon = "1";
  std::string run_report, run_trace, run_claimed;
  std::optional<std::uint64_t> run_seed;
  bool run_strict = false;
  runc->add_option("--alloc", run_alloc, "exact|logstar|threshold|lightheavy")->required();
  runc->add_option("--policy", run_policy, "weighted|cobbdouglas|drf");
  runc->add_option("--instance", run_instance, "JSONL instance file");
  runc->add_option("--gen", run_gen, "inline instance, e.g. geometric:1000");
  runc->add_option("--epsilon", run_epsilon, "lightheavy epsilon as p/q");
  runc->add_option("--seed", run_seed, "seed (threshold draw / inline randperm)");
  runc->add_flag("--strict", run_strict, "halt and exit 2 on invariant violation");
  runc->add_option("--claimed-c", run_claimed,
                   "override the checked approximation claim, as p/q");
  runc->add_option("--report", run_report, "JSON report path");
  runc->add_option("--trace", run_trace, "JSONL allocation trace path");

  // game
  auto* game = app.add_subcommand("game", "Run an adaptive adversary against an allocator");
  std::string game_adversary, game_opponent, game_c = "1", game_epsilon, game_report;
  std::int64_t game_M = 0, game_b = 2, game_n = 1;
  std::uint64_t game_seed = 0;
  game->add_option("--adversary", game_adversary, "batch|monotone")->required();
  game->add_option("--opponent", game_opponent, "allocator id")->required();
  game->add_option("--M", game_M, "base batch size (batch)");
  game->add_option("--b", game_b, "batch divisor (batch)");
  game->add_option("--c", game_c, "approximation claim");
  game->add_option("--n", game_n, "arrivals (monotone)");
  game->add_option("--epsilon", game_epsilon, "lightheavy epsilon (default c-1)");
  game->add_option("--seed", game_seed, "seed (threshold opponent)");
  game->add_option("--report", game_report, "JSON report path");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Run a config file of seeded trials, emit CSV");
  std::string sweep_config, sweep_out;
  sw->add_option("--config", sweep_config, "sweep config JSON")->required();
  sw->add_option("--out", sweep_out, "CSV output path")->required();

  try {
    app.parse(argc, argv);
    if (gen->parsed())
      return cmd_gen(gen_kind, gen_n, gen_weights_file, gen_seed, gen_departures, gen_M, gen_b,
                     gen_c, gen_out);
    if (runc->parsed())
      return cmd_run(run_alloc, run_policy, run_instance, run_gen, run_epsilon, run_seed,
                     run_strict, run_claimed, run_report, run_trace);
    if (game->parsed())
      return cmd_game(game_adversary, game_opponent, game_M, game_b, game_c, game_n, game_epsilon,
                      game_seed, game_report);
    if (sw->parsed()) return cmd_sweep(sweep_config, sweep_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
