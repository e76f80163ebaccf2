#pragma once

#include "ftsim/power_profile.hpp"

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace ftsim {

enum class Direction { Send, Recv };
enum class OpMode { Blocking, Nonblocking };

std::string_view to_string(Direction d) noexcept;
std::string_view to_string(OpMode m) noexcept;

inline constexpr Seconds kNever = std::numeric_limits<Seconds>::infinity();

/// One point-to-point operation in a process program. Offsets are compute
/// seconds at f_max from process start. For blocking operations the wait
/// offset equals the post offset.
struct CommOp {
  int index = 0;
  NodeId peer = -1;
  Direction direction = Direction::Send;
  OpMode mode = OpMode::Blocking;
  Seconds post_time_offset = 0.0;
  Seconds wait_offset = 0.0;
  /// Index of the matching operation in the peer's program (FIFO per channel).
  int match = -1;

  bool operator==(const CommOp&) const = default;
};

struct CommPattern {
  std::vector<std::vector<CommOp>> processes;
  Seconds interval = 0.0;
  bool buffered = false;
  WaitMode wait_mode = WaitMode::Active;
  std::size_t message_size = 0;

  int size() const noexcept { return static_cast<int>(processes.size()); }
  const CommOp& op(NodeId node, int index) const { return processes.at(node).at(index); }
  const CommOp& matching(const CommOp& op) const { return processes.at(op.peer).at(op.match); }

  /// Whether `op` cannot finish without its peer having posted the match.
  bool needs_peer(const CommOp& op) const noexcept {
    return op.direction == Direction::Recv || !buffered;
  }

  bool operator==(const CommPattern&) const = default;
};

/// Recurring message from `src` to `dst`: one message at offset + k * period
/// for k = 0, 1, ... while the post time stays below the horizon.
struct EdgeSpec {
  NodeId src = 0;
  NodeId dst = 0;
  Seconds offset = 0.0;
  /// Zero means "use the pattern interval".
  Seconds period = 0.0;
  /// Negative means "use the pattern wait lag" (non-blocking only).
  Seconds wait_lag = -1.0;

  bool operator==(const EdgeSpec&) const = default;
};

/// Compact, file-level description of a communication pattern.
struct PatternSpec {
  Seconds interval = 0.0;
  OpMode mode = OpMode::Blocking;
  bool buffered = false;
  WaitMode wait_mode = WaitMode::Active;
  std::size_t message_size = 0;
  Seconds wait_lag = 0.0;
  std::vector<EdgeSpec> edges;

  bool operator==(const PatternSpec&) const = default;
};

/// Expands edges into per-process operation lists up to `horizon` and
/// matches sends to receives. Throws ValidationError when a process would
/// post two operations at the same offset.
CommPattern expand_pattern(const PatternSpec& spec, int nodes, Seconds horizon);

/// Assigns CommOp::match FIFO per (sender, receiver) channel and validates
/// the pattern invariants. Throws UnmatchedOp or ValidationError.
void match_operations(CommPattern& pattern);

struct CompletionTimes {
  Seconds sender_done = 0.0;
  Seconds receiver_done = 0.0;
};

/// Completion of a point-to-point transfer with zero transmission latency.
/// `sender_ready` and `receiver_ready` are the times each side has posted
/// its operation. For non-blocking operations the result is the earliest
/// time the corresponding wait can return.
CompletionTimes completion_time(const CommOp& op, const CommPattern& pattern,
                                Seconds sender_ready, Seconds receiver_ready);

/// Earliest post offset strictly after `after` at which `child` posts an
/// operation with `parent`; kNever if none remain.
Seconds next_comm(const CommPattern& pattern, NodeId child, NodeId parent, Seconds after);

/// Power drawn while waiting for a message at frequency `f`.
Watts wait_power(WaitMode mode, const FrequencyLevel& f, const SystemProfile& profile);

}  // namespace ftsim
