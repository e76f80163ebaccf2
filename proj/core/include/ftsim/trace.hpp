#pragma once

#include "ftsim/comm_pattern.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ftsim {

enum class TraceState { Compute, Ckpt, WaitActive, WaitIdle, GoSleep, Sleep, Wakeup, Restart, Reexec, Done };

std::string_view to_string(TraceState s) noexcept;

/// One line of an execution trace.
///
///   S node t0 t1 STATE                      node state over [t0, t1)
///   C src dst t_post t_complete MODE        message transfer
///   F node t BEGIN|END label                strategy flag
struct TraceRecord {
  char kind = 'S';
  NodeId node = -1;
  /// Destination for C records.
  NodeId peer = -1;
  Seconds t0 = 0.0;
  /// End of an S record or completion of a C record; unused by F.
  Seconds t1 = 0.0;
  TraceState state = TraceState::Compute;
  OpMode mode = OpMode::Blocking;
  bool begin = true;
  std::string label;

  static TraceRecord state_span(NodeId node, Seconds t0, Seconds t1, TraceState s);
  static TraceRecord comm(NodeId src, NodeId dst, Seconds t_post, Seconds t_complete, OpMode mode);
  static TraceRecord flag(NodeId node, Seconds t, bool begin, std::string label);

  bool operator==(const TraceRecord&) const = default;
};

/// Stable sort by (time, node, kind).
void sort_trace(std::vector<TraceRecord>& records);

std::string format_record(const TraceRecord& r);

/// Full file contents: the header line and one line per record, sorted.
std::string format_trace(std::vector<TraceRecord> records);

void write_trace(const std::vector<TraceRecord>& records, const std::filesystem::path& path);

/// Replaces `path` with `contents` through a temporary file and a rename.
/// Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace ftsim
