#include "engine/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace botsim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ScanTick: return "scan-tick";
    case EventKind::FlowStart: return "flow-start";
    case EventKind::FlowEnd: return "flow-end";
    case EventKind::DefenseAction: return "defense-action";
    case EventKind::DnsQuery: return "dns-query";
    case EventKind::RebootComplete: return "reboot-complete";
    case EventKind::MetricSample: return "metric-sample";
    case EventKind::PipelineStep: return "pipeline-step";
    case EventKind::DnsLoadTick: return "dns-load-tick";
    case EventKind::TargetCheck: return "target-check";
  }
  return "unknown";
}

bool Engine::later(const Entry& a, const Entry& b) {
  if (a.at != b.at) return a.at > b.at;
  return a.seq > b.seq;
}

std::uint64_t Engine::schedule(SimTime at, EventKind kind, Handler handler) {
  if (!std::isfinite(at)) {
    throw std::logic_error("schedule: non-finite event time");
  }
  if (at < now_) {
    throw std::logic_error("schedule: event at t=" + std::to_string(at) +
                           " is before clock t=" + std::to_string(now_));
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push_back(Entry{at, seq, kind, std::move(handler)});
  std::push_heap(heap_.begin(), heap_.end(), later);
  return seq;
}

std::uint64_t Engine::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw std::logic_error("run_until: t_end before current clock");
  }
  std::uint64_t count = 0;
  while (!heap_.empty() && heap_.front().at <= t_end) {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Entry entry = std::move(heap_.back());
    heap_.pop_back();
    now_ = entry.at;
    try {
      entry.fire();
    } catch (const std::exception& err) {
      throw std::runtime_error(std::string("event handler failed: kind=") +
                               to_string(entry.kind) +
                               " at=" + std::to_string(entry.at) +
                               " seq=" + std::to_string(entry.seq) + ": " +
                               err.what());
    }
    ++count;
    ++processed_;
  }
  now_ = t_end;
  return count;
}

}  // namespace botsim
