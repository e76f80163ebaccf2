#include "ftsim/cascade.hpp"

#include "ftsim/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

namespace ftsim {

ProjectedTimeline ProjectedTimeline::from_offsets(const CommPattern& pattern) {
  ProjectedTimeline tl;
  tl.ops.resize(pattern.processes.size());
  for (std::size_t p = 0; p < pattern.processes.size(); ++p) {
    for (const auto& op : pattern.processes[p]) {
      Seconds done = op.wait_offset;
      if (pattern.needs_peer(op) && op.match >= 0) done = std::max(done, pattern.matching(op).post_time_offset);
      tl.ops[p].push_back({op.post_time_offset, op.wait_offset, done});
    }
  }
  return tl;
}

namespace {

struct Entry {
  Seconds time = 0.0;
  int level = 0;
  NodeId cause = -1;
  int op = -1;
};

class Analysis {
public:
  Analysis(const CommPattern& pattern, const ProjectedTimeline& tl, NodeId failed, Seconds tf, int depth)
      : pattern_(pattern), tl_(tl), failed_(failed), tf_(tf), depth_(depth) {}

  std::vector<BlockEstimate> run() {
    std::vector<BlockEstimate> out;
    std::set<NodeId> global{failed_};
    std::map<NodeId, Entry> list1{{failed_, Entry{tf_, 0, -1, -1}}};
    known_ = list1;

    while (!list1.empty()) {
      std::map<NodeId, Entry> list2;
      for (const auto& [parent, pinfo] : list1) {
        for (NodeId child = 0; child < pattern_.size(); ++child) {
          if (global.count(child) || list1.count(child)) continue;
          auto hit = first_block(child, parent, pinfo);
          if (!hit) continue;
          auto it = list2.find(child);
          if (it == list2.end() || hit->time < it->second.time) list2[child] = *hit;
        }
      }
      for (const auto& [p, e] : list2) known_[p] = e;
      converge(list2);

      for (const auto& [p, e] : list1) global.insert(p);
      for (const auto& [p, e] : list2) {
        out.push_back({p, e.time, e.level, e.cause, e.op});
        known_[p] = e;
      }
      list1 = std::move(list2);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.process < b.process; });
    return out;
  }

private:
  // Whether `holder` made operation `op` reachable to its peer before it
  // stopped. The failed node keeps what was already matched before it
  // failed, and buffered sends it got out in time.
  bool available(NodeId holder, int op) const {
    const auto& o = pattern_.op(holder, op);
    if (holder == failed_) {
      const Seconds own = tl_.at(holder, op).post;
      if (own >= tf_) return false;
      if (o.direction == Direction::Send && pattern_.buffered) return true;
      return tl_.at(o.peer, o.match).post < tf_;
    }
    const Entry& e = known_.at(holder);
    return o.post_time_offset <= pattern_.op(holder, e.op).wait_offset;
  }

  std::optional<Entry> first_block(NodeId child, NodeId parent, const Entry& pinfo) const {
    int examined = 0;
    for (const auto& op : pattern_.processes[static_cast<std::size_t>(child)]) {
      if (op.peer != parent) continue;
      const auto& t = tl_.at(child, op.index);
      if (t.complete < tf_) continue;
      // Already matched before the failure: nothing left to wait for.
      if (t.post < tf_ && tl_.at(parent, op.match).post < tf_) continue;
      if (++examined > depth_) break;
      if (pattern_.needs_peer(op) && !available(parent, op.match)) {
        return Entry{std::max(t.call, pinfo.time), pinfo.level + 1, parent, op.index};
      }
    }
    return std::nullopt;
  }

  // Lowers a block time whenever a sibling that blocks earlier stops a
  // communication in between.
  void converge(std::map<NodeId, Entry>& list2) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& [b, eb] : list2) {
        for (const auto& [a, ea] : list2) {
          if (a == b || !(ea.time < eb.time)) continue;
          for (const auto& op : pattern_.processes[static_cast<std::size_t>(b)]) {
            if (op.peer != a) continue;
            const Seconds t = tl_.at(b, op.index).call;
            if (!(ea.time < t && t < eb.time)) continue;
            if (!pattern_.needs_peer(op) || available(a, op.match)) continue;
            eb = Entry{t, eb.level, a, op.index};
            known_[b] = eb;
            changed = true;
          }
        }
      }
    }
  }

  const CommPattern& pattern_;
  const ProjectedTimeline& tl_;
  NodeId failed_;
  Seconds tf_;
  int depth_;
  std::map<NodeId, Entry> known_;
};

void check_inputs(const CommPattern& pattern, NodeId failed, Seconds fail_time, DepthConfig depth) {
  if (failed < 0 || failed >= pattern.size()) {
    throw ValidationError(fmt::format("cascade: failed node {} is not in the pattern", failed));
  }
  if (!(fail_time >= 0.0)) throw ValidationError("cascade: failure time must be >= 0");
  if (depth.depth < 1) throw ValidationError("cascade: depth must be >= 1");
}

}  // namespace

std::vector<BlockEstimate> estimate_block_times(const CommPattern& pattern, NodeId failed, Seconds fail_time,
                                                DepthConfig depth) {
  return estimate_block_times(pattern, ProjectedTimeline::from_offsets(pattern), failed, fail_time, depth);
}

std::vector<BlockEstimate> estimate_block_times(const CommPattern& pattern, const ProjectedTimeline& timeline,
                                                NodeId failed, Seconds fail_time, DepthConfig depth) {
  check_inputs(pattern, failed, fail_time, depth);
  if (timeline.ops.size() != pattern.processes.size()) {
    throw ValidationError("cascade: timeline does not cover every process");
  }
  return Analysis(pattern, timeline, failed, fail_time, depth.depth).run();
}

int pattern_depth(const CommPattern& pattern) {
  int best = 1;
  if (!(pattern.interval > 0.0)) return best;
  for (std::size_t p = 0; p < pattern.processes.size(); ++p) {
    std::map<std::pair<NodeId, long>, int> counts;
    for (const auto& op : pattern.processes[p]) {
      const long rep = static_cast<long>(std::floor(op.post_time_offset / pattern.interval));
      best = std::max(best, ++counts[{op.peer, rep}]);
    }
  }
  return best;
}

}  // namespace ftsim
