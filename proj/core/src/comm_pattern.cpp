#include "ftsim/comm_pattern.hpp"

#include "ftsim/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace ftsim {

std::string_view to_string(Direction d) noexcept { return d == Direction::Send ? "SEND" : "RECV"; }

std::string_view to_string(OpMode m) noexcept {
  return m == OpMode::Blocking ? "BLOCKING" : "NONBLOCKING";
}

CommPattern expand_pattern(const PatternSpec& spec, int nodes, Seconds horizon) {
  if (!(spec.interval > 0.0)) throw ValidationError("pattern: interval must be > 0");
  if (spec.wait_lag < 0.0) throw ValidationError("pattern: wait_lag must be >= 0");

  CommPattern pattern;
  pattern.processes.resize(static_cast<std::size_t>(nodes));
  pattern.interval = spec.interval;
  pattern.buffered = spec.buffered;
  pattern.wait_mode = spec.wait_mode;
  pattern.message_size = spec.message_size;

  for (const auto& e : spec.edges) {
    if (e.src < 0 || e.src >= nodes || e.dst < 0 || e.dst >= nodes) {
      throw ValidationError(fmt::format("pattern: edge {} -> {} names a node outside 0..{}",
                                        e.src, e.dst, nodes - 1));
    }
    if (e.src == e.dst) throw ValidationError("pattern: edge endpoints must differ");
    if (e.offset < 0.0) throw ValidationError("pattern: edge offset must be >= 0");
    const Seconds period = e.period > 0.0 ? e.period : spec.interval;
    const Seconds lag = spec.mode == OpMode::Nonblocking ? (e.wait_lag >= 0.0 ? e.wait_lag : spec.wait_lag)
                                                         : 0.0;
    for (long k = 0;; ++k) {
      const Seconds t = e.offset + static_cast<Seconds>(k) * period;
      if (!(t < horizon)) break;
      CommOp send{0, e.dst, Direction::Send, spec.mode, t, t + lag, -1};
      CommOp recv{0, e.src, Direction::Recv, spec.mode, t, t + lag, -1};
      pattern.processes[static_cast<std::size_t>(e.src)].push_back(send);
      pattern.processes[static_cast<std::size_t>(e.dst)].push_back(recv);
    }
  }

  for (std::size_t p = 0; p < pattern.processes.size(); ++p) {
    auto& ops = pattern.processes[p];
    std::stable_sort(ops.begin(), ops.end(), [](const CommOp& a, const CommOp& b) {
      return a.post_time_offset < b.post_time_offset;
    });
    for (std::size_t i = 0; i < ops.size(); ++i) ops[i].index = static_cast<int>(i);
  }
  match_operations(pattern);
  return pattern;
}

void match_operations(CommPattern& pattern) {
  const int n = pattern.size();
  // channel (src, dst) -> op indices on each side, in program order
  std::map<std::pair<int, int>, std::pair<std::vector<int>, std::vector<int>>> channels;
  for (int p = 0; p < n; ++p) {
    const auto& ops = pattern.processes[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto& op = ops[i];
      if (op.index != static_cast<int>(i)) {
        throw ValidationError(fmt::format("pattern: process {} op {} has index {}", p, i, op.index));
      }
      if (op.peer < 0 || op.peer >= n || op.peer == p) {
        throw ValidationError(fmt::format("pattern: process {} op {} has invalid peer {}", p, i, op.peer));
      }
      if (i > 0 && !(op.post_time_offset > ops[i - 1].post_time_offset)) {
        throw ValidationError(fmt::format(
            "pattern: process {} posts two operations at offset {} (offsets must strictly increase)", p,
            op.post_time_offset));
      }
      if (op.mode == OpMode::Blocking && op.wait_offset != op.post_time_offset) {
        throw ValidationError("pattern: blocking operation must have wait_offset == post_time_offset");
      }
      if (op.wait_offset < op.post_time_offset) {
        throw ValidationError("pattern: wait_offset must be >= post_time_offset");
      }
      if (op.direction == Direction::Send) {
        channels[{p, op.peer}].first.push_back(static_cast<int>(i));
      } else {
        channels[{op.peer, p}].second.push_back(static_cast<int>(i));
      }
    }
  }
  for (auto& [chan, sides] : channels) {
    const auto& [sends, recvs] = sides;
    if (sends.size() != recvs.size()) {
      throw UnmatchedOp(fmt::format("channel {} -> {}: {} sends but {} receives", chan.first,
                                    chan.second, sends.size(), recvs.size()));
    }
    for (std::size_t k = 0; k < sends.size(); ++k) {
      auto& s = pattern.processes[static_cast<std::size_t>(chan.first)][static_cast<std::size_t>(sends[k])];
      auto& r = pattern.processes[static_cast<std::size_t>(chan.second)][static_cast<std::size_t>(recvs[k])];
      if (s.mode != r.mode) {
        throw ValidationError(fmt::format("channel {} -> {}: message {} mixes blocking and non-blocking",
                                          chan.first, chan.second, k));
      }
      s.match = recvs[k];
      r.match = sends[k];
    }
  }
}

CompletionTimes completion_time(const CommOp& op, const CommPattern& pattern, Seconds sender_ready,
                                Seconds receiver_ready) {
  if (op.match < 0 || op.peer < 0 || op.peer >= pattern.size()) {
    throw UnmatchedOp(fmt::format("operation {} has no matching peer operation", op.index));
  }
  const Seconds both = std::max(sender_ready, receiver_ready);
  if (pattern.buffered) return {sender_ready, both};
  return {both, both};
}

Seconds next_comm(const CommPattern& pattern, NodeId child, NodeId parent, Seconds after) {
  for (const auto& op : pattern.processes.at(static_cast<std::size_t>(child))) {
    if (op.peer == parent && op.post_time_offset > after) return op.post_time_offset;
  }
  return kNever;
}

Watts wait_power(WaitMode mode, const FrequencyLevel& f, const SystemProfile& profile) {
  if (!profile.contains(f)) {
    throw UnknownFrequency(fmt::format("frequency {} GHz is not in the profile", f.ghz));
  }
  return mode == WaitMode::Active ? f.p_active_wait : profile.p_idle_wait;
}

}  // namespace ftsim
