#include "ftsim/event_queue.hpp"

#include "ftsim/errors.hpp"

#include <fmt/format.h>

namespace ftsim {

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::PostSend: return "POST_SEND";
    case EventKind::PostRecv: return "POST_RECV";
    case EventKind::WaitEnter: return "WAIT_ENTER";
    case EventKind::CommComplete: return "COMM_COMPLETE";
    case EventKind::CkptBegin: return "CKPT_BEGIN";
    case EventKind::CkptEnd: return "CKPT_END";
    case EventKind::Failure: return "FAILURE";
    case EventKind::RestartEnd: return "RESTART_END";
    case EventKind::ReexecEnd: return "REEXEC_END";
    case EventKind::GoSleepEnd: return "GO_SLEEP_END";
    case EventKind::WakeupEnd: return "WAKEUP_END";
    case EventKind::SleepEnd: return "SLEEP_END";
    case EventKind::StrategyFlag: return "STRATEGY_FLAG";
    case EventKind::ComputeEnd: return "COMPUTE_END";
    case EventKind::NodeDone: return "NODE_DONE";
    case EventKind::SimEnd: return "SIM_END";
  }
  return "UNKNOWN";
}

EventId EventQueue::schedule(const EventSpec& spec) {
  if (spec.time < clock_) {
    throw PastTime(fmt::format("event {} at t={} scheduled before clock t={}",
                               to_string(spec.kind), spec.time, clock_));
  }
  SimEvent ev{spec.time, next_seq_++, spec.kind, spec.node, spec.payload};
  pending_.emplace(Key{ev.time, ev.seq}, ev);
  index_.emplace(ev.seq, ev.time);
  return ev.seq;
}

SimEvent EventQueue::advance() {
  if (pending_.empty()) throw EmptyQueue();
  auto it = pending_.begin();
  SimEvent ev = it->second;
  pending_.erase(it);
  index_.erase(ev.seq);
  clock_ = ev.time;
  ++popped_;
  return ev;
}

bool EventQueue::cancel(EventId id) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  pending_.erase(Key{it->second, id});
  index_.erase(it);
  ++cancelled_;
  return true;
}

}  // namespace ftsim
