#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <unordered_map>

namespace ftsim {

using Seconds = double;
using NodeId = int;
using EventId = std::uint64_t;

enum class EventKind : std::uint8_t {
  PostSend,
  PostRecv,
  WaitEnter,
  CommComplete,
  CkptBegin,
  CkptEnd,
  Failure,
  RestartEnd,
  ReexecEnd,
  GoSleepEnd,
  WakeupEnd,
  SleepEnd,
  StrategyFlag,
  ComputeEnd,
  NodeDone,
  SimEnd,
};

std::string_view to_string(EventKind kind) noexcept;

struct EventPayload {
  int peer = -1;
  int op = -1;
  int freq = -1;
};

/// What a caller hands to schedule(); the queue assigns the sequence number.
struct EventSpec {
  Seconds time = 0.0;
  EventKind kind = EventKind::SimEnd;
  NodeId node = -1;
  EventPayload payload{};
};

struct SimEvent {
  Seconds time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::SimEnd;
  NodeId node = -1;
  EventPayload payload{};

  EventId id() const noexcept { return seq; }
};

/// Time-ordered event set with a virtual clock. Ties on time pop in
/// insertion order.
class EventQueue {
public:
  EventId schedule(const EventSpec& spec);
  SimEvent advance();
  bool cancel(EventId id);

  Seconds clock() const noexcept { return clock_; }
  std::size_t size() const noexcept { return pending_.size(); }
  bool empty() const noexcept { return pending_.empty(); }

  std::uint64_t scheduled_count() const noexcept { return next_seq_; }
  std::uint64_t popped_count() const noexcept { return popped_; }
  std::uint64_t cancelled_count() const noexcept { return cancelled_; }

private:
  struct Key {
    Seconds time;
    std::uint64_t seq;
    bool operator<(const Key& o) const noexcept {
      return time < o.time || (time == o.time && seq < o.seq);
    }
  };

  std::map<Key, SimEvent> pending_;
  std::unordered_map<EventId, Seconds> index_;
  Seconds clock_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t popped_ = 0;
  std::uint64_t cancelled_ = 0;
};

}  // namespace ftsim
