#pragma once

#include "ftsim/event_queue.hpp"

#include <vector>

namespace ftsim {

/// Time-triggered, uncoordinated checkpointing. Each process starts its
/// schedule at its own phase offset.
struct CheckpointPolicy {
  Seconds interval = 3600.0;
  /// Duration at f_max.
  Seconds duration = 120.0;
  bool anticipation_enabled = false;
  /// A blocked process checkpoints first when its last checkpoint is at
  /// least alpha * interval old.
  double alpha = 0.5;
  std::vector<Seconds> phase_offsets;

  Seconds offset_for(NodeId process) const;
  void validate() const;

  bool operator==(const CheckpointPolicy&) const = default;
};

struct FailureSpec {
  NodeId node = 0;
  Seconds time = 0.0;
  /// Time to reload the checkpoint and restart the failed process.
  Seconds restart_duration = 0.0;

  bool operator==(const FailureSpec&) const = default;
};

/// Checkpoint trigger times offset, offset + interval, ... not exceeding
/// horizon.
std::vector<Seconds> checkpoint_times(const CheckpointPolicy& policy, NodeId process, Seconds horizon);

bool should_anticipate(const CheckpointPolicy& policy, Seconds block_time, Seconds last_ckpt);

/// End of restart plus re-execution of the work lost since the last checkpoint.
Seconds recovery_end(const FailureSpec& spec, Seconds last_ckpt);

}  // namespace ftsim
