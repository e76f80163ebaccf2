#include "ftsim/trace.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace ftsim {

std::string_view to_string(TraceState s) noexcept {
  switch (s) {
    case TraceState::Compute: return "COMPUTE";
    case TraceState::Ckpt: return "CKPT";
    case TraceState::WaitActive: return "WAIT_ACTIVE";
    case TraceState::WaitIdle: return "WAIT_IDLE";
    case TraceState::GoSleep: return "GO_SLEEP";
    case TraceState::Sleep: return "SLEEP";
    case TraceState::Wakeup: return "WAKEUP";
    case TraceState::Restart: return "RESTART";
    case TraceState::Reexec: return "REEXEC";
    case TraceState::Done: return "DONE";
  }
  return "COMPUTE";
}

TraceRecord TraceRecord::state_span(NodeId node, Seconds t0, Seconds t1, TraceState s) {
  TraceRecord r;
  r.kind = 'S';
  r.node = node;
  r.t0 = t0;
  r.t1 = t1;
  r.state = s;
  return r;
}

TraceRecord TraceRecord::comm(NodeId src, NodeId dst, Seconds t_post, Seconds t_complete, OpMode mode) {
  TraceRecord r;
  r.kind = 'C';
  r.node = src;
  r.peer = dst;
  r.t0 = t_post;
  r.t1 = t_complete;
  r.mode = mode;
  return r;
}

TraceRecord TraceRecord::flag(NodeId node, Seconds t, bool begin, std::string label) {
  TraceRecord r;
  r.kind = 'F';
  r.node = node;
  r.t0 = t;
  r.begin = begin;
  r.label = std::move(label);
  return r;
}

void sort_trace(std::vector<TraceRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const TraceRecord& a, const TraceRecord& b) {
    if (a.t0 != b.t0) return a.t0 < b.t0;
    if (a.node != b.node) return a.node < b.node;
    return a.kind < b.kind;
  });
}

std::string format_record(const TraceRecord& r) {
  switch (r.kind) {
    case 'S': return fmt::format("S {} {:.3f} {:.3f} {}", r.node, r.t0, r.t1, to_string(r.state));
    case 'C': return fmt::format("C {} {} {:.3f} {:.3f} {}", r.node, r.peer, r.t0, r.t1, to_string(r.mode));
    default: return fmt::format("F {} {:.3f} {} {}", r.node, r.t0, r.begin ? "BEGIN" : "END", r.label);
  }
}

std::string format_trace(std::vector<TraceRecord> records) {
  sort_trace(records);
  std::string out = "TRACE v1\n";
  for (const auto& r : records) {
    out += format_record(r);
    out += '\n';
  }
  return out;
}

void write_trace(const std::vector<TraceRecord>& records, const std::filesystem::path& path) {
  write_file_atomic(path, format_trace(records));
}

}  // namespace ftsim
