#include "fairdyn/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace fairdyn {

namespace {

using ordered_json = nlohmann::ordered_json;

BigInt parse_weight(const nlohmann::json& w, std::size_t line) {
  try {
    if (w.is_string()) return BigInt(w.get<std::string>());
    if (w.is_number_integer()) return BigInt(w.get<std::int64_t>());
  } catch (const std::exception&) {
  }
  throw std::runtime_error("line " + std::to_string(line) + ": weight must be a decimal string");
}

}  // namespace

EventStream read_instance_jsonl(std::istream& in) {
  EventStream events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.contains("t") || !j.contains("op") || !j.contains("id"))
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": every event needs t, op and id");
    const TimeStep t = j.at("t").get<TimeStep>();
    const JobId id = j.at("id").get<JobId>();
    const std::string op = j.at("op").get<std::string>();
    if (op == "depart") {
      events.push_back(Event::departure(t, id));
    } else if (op == "arrive") {
      Job job;
      job.id = id;
      job.arrival = t;
      if (!j.contains("w"))
        throw std::runtime_error("line " + std::to_string(line_no) + ": arrival needs a weight");
      job.weight = parse_weight(j.at("w"), line_no);
      if (j.contains("demands")) {
        for (const auto& d : j.at("demands")) {
          try {
            job.demands.push_back(parse_fraction(d.get<std::string>()));
          } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
          }
        }
      }
      events.push_back(Event::arrival(t, std::move(job)));
    } else {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": op must be arrive or depart");
    }
  }
  if (auto problem = validate_event_stream(events))
    throw std::runtime_error("invalid event stream: " + *problem);
  return events;
}

void write_instance_jsonl(const EventStream& events, std::ostream& out) {
  for (const Event& ev : events) {
    ordered_json j;
    j["t"] = ev.time;
    j["op"] = ev.kind == Event::Kind::Arrival ? "arrive" : "depart";
    j["id"] = ev.id;
    if (ev.kind == Event::Kind::Arrival) {
      j["w"] = ev.job.weight.str();
      if (!ev.job.demands.empty()) {
        ordered_json ds = ordered_json::array();
        for (const Frac& d : ev.job.demands) ds.push_back(fraction_string(d));
        j["demands"] = std::move(ds);
      }
    }
    out << j.dump() << '\n';
  }
}

std::string fixed_decimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string report_json(const std::map<std::string, std::string>& config_echo,
                        const RunReport& report) {
  ordered_json j;
  j["format_version"] = 1;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config_echo) cfg[k] = v;
  j["config"] = std::move(cfg);
  j["arrivals"] = report.arrivals;
  j["departures"] = report.departures;
  j["total_disruptions"] = report.total_disruptions;
  j["min_per_job"] = report.min_per_job;
  j["max_per_job"] = report.max_per_job;
  j["mean_per_job"] = fixed_decimal(report.mean_per_job);
  j["mean_per_event"] = fixed_decimal(report.mean_per_event);
  ordered_json hist = ordered_json::object();
  for (const auto& [count, jobs] : report.histogram) hist[std::to_string(count)] = jobs;
  j["disruption_histogram"] = std::move(hist);
  j["worst_ratio"] = fraction_string(report.worst_ratio);
  j["worst_ratio_decimal"] = report.worst_ratio_decimal;
  j["feasibility_violations"] = report.feasibility_violations;
  j["approx_violations"] = report.approx_violations;
  j["first_violation"] = report.first_violation;
  j["halted"] = report.halted;
  j["halted_at"] = report.halted_at;
  return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "config_id,seed,n,arrivals,departures,total_disruptions,max_per_job,"
         "mean_per_event,worst_ratio_decimal,feasible\n";
  for (const SweepRow& row : rows) {
    out << row.config_id << ',' << row.seed << ',' << row.n << ',' << row.arrivals << ','
        << row.departures << ',' << row.total_disruptions << ',' << row.max_per_job << ','
        << fixed_decimal(row.mean_per_event) << ',' << row.worst_ratio_decimal << ','
        << (row.feasible && !row.failed ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace fairdyn
