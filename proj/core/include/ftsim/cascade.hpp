#pragma once

#include "ftsim/comm_pattern.hpp"

#include <vector>

namespace ftsim {

struct BlockEstimate {
  NodeId process = -1;
  Seconds block_time = 0.0;
  /// 1 for processes blocked directly by the failed node, then outward.
  int level = 1;
  NodeId cause = -1;
  /// Program index of the operation the process blocks on.
  int op = -1;

  bool operator==(const BlockEstimate&) const = default;
};

struct DepthConfig {
  int depth = 1;

  bool operator==(const DepthConfig&) const = default;
};

/// Failure-free wall-clock times of every operation: when it is posted,
/// when the process calls the wait, and when the wait returns.
struct OpTiming {
  Seconds post = 0.0;
  Seconds call = 0.0;
  Seconds complete = 0.0;
};

struct ProjectedTimeline {
  std::vector<std::vector<OpTiming>> ops;

  const OpTiming& at(NodeId node, int op) const { return ops.at(node).at(op); }

  /// Timeline read straight from the pattern offsets: every process runs at
  /// f_max without checkpoints.
  static ProjectedTimeline from_offsets(const CommPattern& pattern);
};

/// Which surviving processes block because of the failure of `failed` at
/// `fail_time`, when, and against whom. Each process examines at most
/// `depth` communications with its parent, counted from the failure.
std::vector<BlockEstimate> estimate_block_times(const CommPattern& pattern, NodeId failed, Seconds fail_time,
                                                DepthConfig depth);

/// Same analysis over a projected timeline, typically one measured on a
/// failure-free simulation so checkpoint delays are accounted for.
std::vector<BlockEstimate> estimate_block_times(const CommPattern& pattern, const ProjectedTimeline& timeline,
                                                NodeId failed, Seconds fail_time, DepthConfig depth);

/// Largest number of operations any pair of processes exchanges within one
/// pattern interval.
int pattern_depth(const CommPattern& pattern);

}  // namespace ftsim
