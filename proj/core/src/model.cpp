#include "fairdyn/model.hpp"

#include <set>

namespace fairdyn {

std::optional<std::string> validate_event_stream(const EventStream& events) {
  std::set<JobId> seen, alive;
  TimeStep last_time = std::numeric_limits<TimeStep>::min();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (e.time < last_time)
      return "time regression at event " + std::to_string(i) + " (t=" +
             std::to_string(e.time) + " after t=" + std::to_string(last_time) + ")";
    last_time = e.time;
    if (e.kind == Event::Kind::Arrival) {
      if (e.job.weight < 1)
        return "nonpositive weight for job " + std::to_string(e.job.id);
      if (!seen.insert(e.job.id).second)
        return "duplicate id " + std::to_string(e.job.id);
      alive.insert(e.job.id);
    } else {
      if (!alive.erase(e.id)) return "dangling departure of job " + std::to_string(e.id);
    }
  }
  return std::nullopt;
}

DisruptionLedger ledger_from_trace(const AllocationTrace& trace) {
  DisruptionLedger ledger;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const auto& prev = trace[i - 1].entries;
    for (const auto& [id, entry] : trace[i].entries) {
      auto it = prev.find(id);
      if (it != prev.end() && it->second.first != entry.first)
        ledger.record(id, trace[i].time);
    }
  }
  return ledger;
}

}  // namespace fairdyn
