#pragma once

#include "ftsim/checkpoint.hpp"
#include "ftsim/comm_pattern.hpp"
#include "ftsim/energy.hpp"
#include "ftsim/power_profile.hpp"
#include "ftsim/trace.hpp"

#include <optional>
#include <vector>

namespace ftsim {

/// Strategy to apply on one surviving node from the failure until the
/// operation it blocks on completes.
struct NodeDirective {
  NodeId node = -1;
  /// Index into SystemProfile::freqs for the compute phase.
  std::size_t compute_freq = 0;
  WaitAction wait_action = WaitAction::None;
  int block_op = -1;
  /// Block time seen in the reference run. Checkpoint triggers from here on
  /// wait until the operation completes, as they would in the reference run.
  Seconds block_time = 0.0;
  /// Time the blocking operation is expected to complete.
  Seconds release = 0.0;
  bool anticipate = false;
};

struct SimConfig {
  SystemProfile profile;
  CheckpointPolicy ckpt;
  std::optional<FailureSpec> failure;
  /// Application work per process, in seconds at f_max.
  Seconds horizon = 0.0;
  std::vector<NodeDirective> directives;
};

struct OpRecord {
  Seconds post = kNever;
  /// When the process reached the wait for this operation.
  Seconds call = kNever;
  /// When the wait returned.
  Seconds complete = kNever;
  /// The process checkpointed ahead of this wait.
  bool anticipated = false;
};

struct CkptRecord {
  NodeId node = -1;
  Seconds begin = 0.0;
  Seconds end = 0.0;
  bool anticipated = false;
};

struct SimResult {
  std::vector<TraceRecord> trace;
  std::vector<std::vector<OpRecord>> ops;
  std::vector<CkptRecord> checkpoints;
  std::vector<Seconds> done_time;
  /// Work position of each process at the failure instant.
  std::vector<Seconds> work_at_failure;
  /// Time each process still spends finishing a checkpoint already under way
  /// at the failure instant.
  std::vector<Seconds> busy_at_failure;
  Seconds makespan = 0.0;
  std::uint64_t events = 0;
};

/// Runs the application to completion. Deterministic for identical inputs.
/// Throws Error if the run deadlocks.
SimResult simulate(const CommPattern& pattern, const SimConfig& config);

}  // namespace ftsim
