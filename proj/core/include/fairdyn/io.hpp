#pragma once

#include "fairdyn/model.hpp"
#include "fairdyn/simulator.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fairdyn {

/// One event per line:
///   {"t": int, "op": "arrive"|"depart", "id": int, "w": "decimal",
///    "demands": ["p/q", ...]}   (demands optional)
/// Weights are decimal integer strings so arbitrarily large values
/// round-trip exactly. Throws std::runtime_error with a line number
/// on malformed input; the result additionally passes
/// validate_event_stream.
EventStream read_instance_jsonl(std::istream& in);
void write_instance_jsonl(const EventStream& events, std::ostream& out);

/// Deterministic JSON run report (format_version 1). Wall-clock time
/// is deliberately not part of the file, so seeded runs serialize
/// byte-identically.
std::string report_json(const std::map<std::string, std::string>& config_echo,
                        const RunReport& report);

/// CSV with one row per sweep trial; failed runs keep the row with
/// zeroed metrics and feasible=0.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Fixed 6-decimal rendering used everywhere a double lands in a
/// report, keeping output locale- and platform-stable.
std::string fixed_decimal(double value);

}  // namespace fairdyn
