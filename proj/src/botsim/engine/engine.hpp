#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace botsim {

// Simulated seconds. The clock never runs backwards across processed events.
using SimTime = double;

enum class EventKind : std::uint8_t {
  ScanTick,
  FlowStart,
  FlowEnd,
  DefenseAction,
  DnsQuery,
  RebootComplete,
  MetricSample,
  PipelineStep,
  DnsLoadTick,
  TargetCheck,
};

const char* to_string(EventKind kind);

// Single-threaded discrete-event core: virtual clock plus a priority queue
// ordered by (time asc, insertion sequence asc). One Engine per run; runs
// share no mutable state, so independent runs may execute concurrently.
class Engine {
 public:
  using Handler = std::function<void()>;

  SimTime now() const { return now_; }

  // Enqueues an event. Scheduling into the past is a logic bug and throws.
  std::uint64_t schedule(SimTime at, EventKind kind, Handler handler);

  // Processes every event with at <= t_end in (at, seq) order and advances
  // the clock to t_end. Handler exceptions abort the run with the offending
  // event identified. Returns the number of events processed by this call.
  std::uint64_t run_until(SimTime t_end);

  std::size_t pending() const { return heap_.size(); }
  std::uint64_t processed_total() const { return processed_; }

 private:
  struct Entry {
    SimTime at;
    std::uint64_t seq;
    EventKind kind;
    Handler fire;
  };

  static bool later(const Entry& a, const Entry& b);

  SimTime now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t processed_ = 0;
  std::vector<Entry> heap_;
};

}  // namespace botsim
