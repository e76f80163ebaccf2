#include "ftsim/simulator.hpp"

#include "ftsim/errors.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace ftsim {
namespace {

enum class StepKind { Post, Wait };

struct Step {
  Seconds offset = 0.0;
  StepKind kind = StepKind::Post;
  int op = 0;
};

enum class Phase { Compute, Checking, Ckpt, Waiting, GoSleep, Sleep, Wakeup, Restart, Done };

struct Node {
  std::vector<Step> steps;
  std::vector<std::size_t> post_step;
  std::size_t next = 0;
  Seconds work = 0.0;
  Seconds end_work = 0.0;

  Phase phase = Phase::Compute;
  TraceState state = TraceState::Compute;
  Seconds since = 0.0;
  std::size_t freq = 0;

  bool running = false;
  Seconds seg_start = 0.0;
  Seconds seg_target = 0.0;
  EventId seg_ev = 0;

  // Rollback point: the state captured by the last completed checkpoint.
  Seconds last_ckpt_end = 0.0;
  Seconds rb_work = 0.0;
  std::size_t rb_next = 0;

  // Checkpoint in progress.
  Seconds ck_work = 0.0;
  std::size_t ck_next = 0;
  Seconds ck_begin = 0.0;
  Seconds ck_end = 0.0;
  bool ck_anticipated = false;
  EventId ck_ev = 0;

  bool ckpt_pending = false;
  Seconds pending_since = 0.0;
  EventId trig_ev = 0;
  bool trig_live = false;
  Seconds first_trigger = 0.0;
  long next_trigger = 0;

  int wait_op = -1;
  EventId aux_ev = 0;
  bool aux_live = false;

  bool replaying = false;
  Seconds replay_target = 0.0;
  std::vector<int> retracted;

  const NodeDirective* plan = nullptr;
  bool plan_active = false;
  bool flag_compute = false;
  bool flag_wait = false;
  bool flag_none = false;
};

std::string wait_label(WaitAction a) { return std::string(to_string(a)); }

class Engine {
public:
  Engine(const CommPattern& pattern, const SimConfig& cfg) : pattern_(pattern), cfg_(cfg), prof_(cfg.profile) {
    n_ = pattern.size();
    nodes_.resize(static_cast<std::size_t>(n_));
    posted_.resize(static_cast<std::size_t>(n_));
    res_.ops.resize(static_cast<std::size_t>(n_));
    res_.done_time.assign(static_cast<std::size_t>(n_), kNever);
    res_.work_at_failure.assign(static_cast<std::size_t>(n_), 0.0);
    res_.busy_at_failure.assign(static_cast<std::size_t>(n_), 0.0);

    for (NodeId p = 0; p < n_; ++p) {
      auto& nd = node(p);
      const auto& ops = pattern.processes[static_cast<std::size_t>(p)];
      for (const auto& op : ops) {
        nd.steps.push_back({op.post_time_offset, StepKind::Post, op.index});
        nd.steps.push_back({op.wait_offset, StepKind::Wait, op.index});
      }
      std::sort(nd.steps.begin(), nd.steps.end(), [](const Step& a, const Step& b) {
        if (a.offset != b.offset) return a.offset < b.offset;
        if (a.kind != b.kind) return a.kind == StepKind::Post;
        return a.op < b.op;
      });
      nd.post_step.assign(ops.size(), 0);
      for (std::size_t i = 0; i < nd.steps.size(); ++i) {
        if (nd.steps[i].kind == StepKind::Post) nd.post_step[static_cast<std::size_t>(nd.steps[i].op)] = i;
      }
      nd.end_work = cfg.horizon;
      if (!nd.steps.empty()) nd.end_work = std::max(nd.end_work, nd.steps.back().offset);
      posted_[static_cast<std::size_t>(p)].assign(ops.size(), 0);
      res_.ops[static_cast<std::size_t>(p)].resize(ops.size());
      nd.first_trigger = cfg.ckpt.offset_for(p);
    }

    for (const auto& d : cfg.directives) {
      if (d.node < 0 || d.node >= n_) throw ValidationError(fmt::format("directive for unknown node {}", d.node));
      if (d.compute_freq >= prof_.freqs.size()) throw ValidationError("directive frequency out of range");
      if (d.block_op < 0 || d.block_op >= static_cast<int>(pattern.processes[static_cast<std::size_t>(d.node)].size())) {
        throw ValidationError(fmt::format("directive for node {} names unknown operation {}", d.node, d.block_op));
      }
      if (cfg.failure && d.node == cfg.failure->node) throw ValidationError("directive targets the failed node");
      node(d.node).plan = &d;
    }
  }

  SimResult run() {
    if (cfg_.failure) q_.schedule({cfg_.failure->time, EventKind::Failure, cfg_.failure->node, {}});
    for (NodeId p = 0; p < n_; ++p) {
      arm_trigger(p);
      advance(p);
    }
    bool ended = false;
    while (!q_.empty() && !ended) {
      const SimEvent ev = q_.advance();
      now_ = ev.time;
      const NodeId p = ev.node;
      switch (ev.kind) {
        case EventKind::ComputeEnd: on_compute_end(p); break;
        case EventKind::WaitEnter: on_wait_enter(p, ev.payload.op); break;
        case EventKind::CommComplete: on_comm_complete(p, ev.payload.op); break;
        case EventKind::CkptBegin: on_trigger(p); break;
        case EventKind::CkptEnd: on_ckpt_end(p); break;
        case EventKind::Failure: on_failure(p); break;
        case EventKind::RestartEnd: on_restart_end(p); break;
        case EventKind::ReexecEnd: on_reexec_end(p); break;
        case EventKind::GoSleepEnd: on_go_sleep_end(p); break;
        case EventKind::SleepEnd: on_sleep_end(p); break;
        case EventKind::WakeupEnd: on_wakeup_end(p); break;
        case EventKind::NodeDone: on_done(p); break;
        case EventKind::SimEnd: ended = true; break;
        default: break;
      }
    }
    if (done_ < n_) {
      throw Error(fmt::format("simulation deadlocked at t={:.3f} with {} of {} processes finished", now_, done_, n_));
    }
    res_.makespan = now_;
    for (NodeId p = 0; p < n_; ++p) {
      auto& nd = node(p);
      if (res_.makespan > nd.since) res_.trace.push_back(TraceRecord::state_span(p, nd.since, res_.makespan, nd.state));
    }
    res_.events = q_.popped_count();
    sort_trace(res_.trace);
    return std::move(res_);
  }

private:
  Node& node(NodeId p) { return nodes_[static_cast<std::size_t>(p)]; }
  OpRecord& rec(NodeId p, int op) { return res_.ops[static_cast<std::size_t>(p)][static_cast<std::size_t>(op)]; }
  char& posted(NodeId p, int op) { return posted_[static_cast<std::size_t>(p)][static_cast<std::size_t>(op)]; }
  const CommOp& op_of(NodeId p, int op) const { return pattern_.op(p, op); }
  const FrequencyLevel& level(std::size_t f) const { return prof_.freqs[f]; }

  EventId at(Seconds t, EventKind kind, NodeId p, int op = -1) {
    return q_.schedule({t, kind, p, EventPayload{-1, op, -1}});
  }

  void set_state(NodeId p, TraceState s) {
    auto& nd = node(p);
    if (s == nd.state) return;
    if (now_ > nd.since) res_.trace.push_back(TraceRecord::state_span(p, nd.since, now_, nd.state));
    nd.state = s;
    nd.since = now_;
  }

  void flag(NodeId p, bool begin, std::string label) {
    res_.trace.push_back(TraceRecord::flag(p, now_, begin, std::move(label)));
  }

  std::string freq_label(std::size_t f) const { return "FREQ_" + format_ghz(level(f).ghz); }

  TraceState wait_state() const {
    return pattern_.wait_mode == WaitMode::Active ? TraceState::WaitActive : TraceState::WaitIdle;
  }

  bool is_complete(NodeId p, int op) {
    if (!posted(p, op)) return false;
    const auto& o = op_of(p, op);
    return !pattern_.needs_peer(o) || posted(o.peer, o.match);
  }

  void arm_trigger(NodeId p) {
    auto& nd = node(p);
    const Seconds t = nd.first_trigger + static_cast<Seconds>(nd.next_trigger++) * cfg_.ckpt.interval;
    nd.trig_ev = at(t, EventKind::CkptBegin, p);
    nd.trig_live = true;
  }

  // Schedules arrival at the next program point at the current frequency.
  void advance(NodeId p) {
    auto& nd = node(p);
    EventKind kind = EventKind::ComputeEnd;
    Seconds target = nd.end_work;
    if (nd.replaying && (nd.next >= nd.steps.size() || nd.replay_target <= nd.steps[nd.next].offset)) {
      target = nd.replay_target;
      kind = EventKind::ReexecEnd;
    } else if (nd.next < nd.steps.size()) {
      target = nd.steps[nd.next].offset;
    } else {
      kind = EventKind::NodeDone;
    }
    const Seconds dt = std::max(0.0, target - nd.work) * level(nd.freq).beta;
    nd.seg_start = now_;
    nd.seg_target = target;
    nd.seg_ev = at(now_ + dt, kind, p);
    nd.running = true;
  }

  void interrupt(NodeId p) {
    auto& nd = node(p);
    if (!nd.running) return;
    nd.work = std::min(nd.seg_target, nd.work + (now_ - nd.seg_start) / level(nd.freq).beta);
    q_.cancel(nd.seg_ev);
    nd.running = false;
  }

  void on_compute_end(NodeId p) {
    auto& nd = node(p);
    nd.running = false;
    nd.work = nd.seg_target;
    const Step step = nd.steps[nd.next++];
    if (step.kind == StepKind::Post) {
      do_post(p, step.op);
      advance(p);
    } else {
      nd.phase = Phase::Checking;
      nd.wait_op = step.op;
      nd.aux_ev = at(now_, EventKind::WaitEnter, p, step.op);
      nd.aux_live = true;
    }
  }

  void do_post(NodeId p, int op) {
    if (posted(p, op)) return;
    posted(p, op) = true;
    rec(p, op).post = now_;
    const auto& o = op_of(p, op);
    if (!posted(o.peer, o.match)) return;
    const bool sending = o.direction == Direction::Send;
    const NodeId src = sending ? p : o.peer;
    const NodeId dst = sending ? o.peer : p;
    const int send_op = sending ? op : o.match;
    res_.trace.push_back(TraceRecord::comm(src, dst, rec(src, send_op).post, now_, o.mode));
    notify(o.peer, o.match);
  }

  void notify(NodeId q, int op) {
    auto& nd = node(q);
    if (nd.phase == Phase::Waiting && nd.wait_op == op) at(now_, EventKind::CommComplete, q, op);
  }

  void on_wait_enter(NodeId p, int op) {
    auto& nd = node(p);
    nd.aux_live = false;
    if (rec(p, op).call == kNever) rec(p, op).call = now_;
    if (is_complete(p, op)) {
      finish_wait(p, op);
      return;
    }
    const bool planned = nd.plan_active && op == nd.plan->block_op;
    const bool anticipate = planned ? nd.plan->anticipate
                                    : !nd.replaying && should_anticipate(cfg_.ckpt, now_, nd.last_ckpt_end);
    nd.wait_op = op;
    if (anticipate) {
      rec(p, op).anticipated = true;
      start_ckpt(p, true);
      return;
    }
    enter_wait(p, op);
  }

  void enter_wait(NodeId p, int op) {
    auto& nd = node(p);
    nd.phase = Phase::Waiting;
    nd.wait_op = op;
    if (nd.plan_active && op == nd.plan->block_op) {
      const auto action = nd.plan->wait_action;
      if (nd.flag_compute) {
        flag(p, false, freq_label(nd.plan->compute_freq));
        nd.flag_compute = false;
      }
      if (action != WaitAction::None) {
        flag(p, true, wait_label(action));
        nd.flag_wait = true;
      }
      if (action == WaitAction::MinFreq) nd.freq = prof_.freqs.size() - 1;
      if (action == WaitAction::Sleep && nd.plan->release - now_ >= prof_.t_go_sleep + prof_.t_wakeup) {
        nd.phase = Phase::GoSleep;
        set_state(p, TraceState::GoSleep);
        nd.aux_ev = at(now_ + prof_.t_go_sleep, EventKind::GoSleepEnd, p);
        nd.aux_live = true;
        return;
      }
    }
    set_state(p, wait_state());
  }

  void on_comm_complete(NodeId p, int op) {
    auto& nd = node(p);
    if (nd.phase == Phase::Waiting && nd.wait_op == op && is_complete(p, op)) finish_wait(p, op);
  }

  void finish_wait(NodeId p, int op) {
    auto& nd = node(p);
    rec(p, op).complete = now_;
    nd.wait_op = -1;
    if (nd.plan_active && op == nd.plan->block_op) end_plan(p);
    resume(p);
  }

  void end_plan(NodeId p) {
    auto& nd = node(p);
    if (nd.flag_compute) flag(p, false, freq_label(nd.plan->compute_freq));
    if (nd.flag_wait) flag(p, false, wait_label(nd.plan->wait_action));
    if (nd.flag_none) flag(p, false, "NONE");
    nd.flag_compute = nd.flag_wait = nd.flag_none = false;
    nd.plan_active = false;
    nd.freq = 0;
  }

  bool ckpt_deferred(const Node& nd) const {
    return nd.plan_active && nd.pending_since >= nd.plan->block_time;
  }

  void resume(NodeId p) {
    auto& nd = node(p);
    nd.phase = Phase::Compute;
    set_state(p, nd.replaying ? TraceState::Reexec : TraceState::Compute);
    if (nd.ckpt_pending && !nd.replaying && !ckpt_deferred(nd)) {
      start_ckpt(p, false);
      return;
    }
    advance(p);
  }

  void on_trigger(NodeId p) {
    auto& nd = node(p);
    nd.trig_live = false;
    if (nd.phase == Phase::Done) return;
    arm_trigger(p);
    if (nd.phase == Phase::Restart || nd.replaying || nd.phase == Phase::Ckpt) return;
    if (nd.ckpt_pending) return;
    const bool deferred = nd.plan_active && now_ >= nd.plan->block_time;
    if (nd.phase == Phase::Compute && !deferred) {
      interrupt(p);
      start_ckpt(p, false);
      return;
    }
    nd.ckpt_pending = true;
    nd.pending_since = now_;
  }

  void start_ckpt(NodeId p, bool anticipated) {
    auto& nd = node(p);
    interrupt(p);
    nd.phase = Phase::Ckpt;
    set_state(p, TraceState::Ckpt);
    nd.ck_work = nd.work;
    nd.ck_next = nd.next;
    nd.ck_begin = now_;
    nd.ck_end = now_ + cfg_.ckpt.duration * level(nd.freq).gamma;
    nd.ck_anticipated = anticipated;
    nd.ck_ev = at(nd.ck_end, EventKind::CkptEnd, p);
    nd.ckpt_pending = false;
  }

  void on_ckpt_end(NodeId p) {
    auto& nd = node(p);
    res_.checkpoints.push_back({p, nd.ck_begin, now_, nd.ck_anticipated});
    nd.last_ckpt_end = now_;
    nd.rb_work = nd.ck_work;
    nd.rb_next = nd.ck_next;
    if (nd.ck_anticipated) {
      const int op = nd.wait_op;
      if (is_complete(p, op)) {
        finish_wait(p, op);
      } else {
        enter_wait(p, op);
      }
      return;
    }
    resume(p);
  }

  void on_failure(NodeId f) {
    for (NodeId p = 0; p < n_; ++p) {
      auto& nd = node(p);
      Seconds w = nd.work;
      if (nd.running) w = std::min(nd.seg_target, w + (now_ - nd.seg_start) / level(nd.freq).beta);
      res_.work_at_failure[static_cast<std::size_t>(p)] = w;
      if (nd.phase == Phase::Ckpt) res_.busy_at_failure[static_cast<std::size_t>(p)] = nd.ck_end - now_;
    }

    auto& fn = node(f);
    interrupt(f);
    if (fn.phase == Phase::Ckpt) q_.cancel(fn.ck_ev);
    if (fn.aux_live) q_.cancel(fn.aux_ev);
    fn.aux_live = false;
    fn.replay_target = fn.work;
    for (int op = 0; op < static_cast<int>(posted_[static_cast<std::size_t>(f)].size()); ++op) {
      if (posted(f, op) && !is_complete(f, op)) {
        posted(f, op) = false;
        fn.retracted.push_back(op);
      }
    }
    fn.phase = Phase::Restart;
    fn.ckpt_pending = false;
    fn.wait_op = -1;
    fn.freq = 0;
    set_state(f, TraceState::Restart);
    at(now_ + cfg_.failure->restart_duration, EventKind::RestartEnd, f);

    for (NodeId p = 0; p < n_; ++p) {
      auto& nd = node(p);
      if (!nd.plan) continue;
      nd.plan_active = true;
      const auto f_idx = nd.plan->compute_freq;
      if (f_idx != 0) {
        flag(p, true, freq_label(f_idx));
        nd.flag_compute = true;
      } else if (nd.plan->wait_action == WaitAction::None) {
        flag(p, true, "NONE");
        nd.flag_none = true;
      }
      if (nd.running) {
        interrupt(p);
        nd.freq = f_idx;
        advance(p);
      } else {
        nd.freq = f_idx;
      }
    }
  }

  void on_restart_end(NodeId f) {
    auto& nd = node(f);
    nd.work = nd.rb_work;
    nd.next = nd.rb_next;
    for (int op : nd.retracted) {
      if (nd.post_step[static_cast<std::size_t>(op)] < nd.next) do_post(f, op);
    }
    nd.retracted.clear();
    nd.replaying = true;
    nd.phase = Phase::Compute;
    set_state(f, TraceState::Reexec);
    advance(f);
  }

  void on_reexec_end(NodeId f) {
    auto& nd = node(f);
    nd.running = false;
    nd.work = nd.replay_target;
    nd.replaying = false;
    resume(f);
  }

  void on_go_sleep_end(NodeId p) {
    auto& nd = node(p);
    nd.phase = Phase::Sleep;
    set_state(p, TraceState::Sleep);
    nd.aux_ev = at(std::max(now_, nd.plan->release - prof_.t_wakeup), EventKind::SleepEnd, p);
  }

  void on_sleep_end(NodeId p) {
    auto& nd = node(p);
    nd.phase = Phase::Wakeup;
    set_state(p, TraceState::Wakeup);
    nd.aux_ev = at(now_ + prof_.t_wakeup, EventKind::WakeupEnd, p);
  }

  void on_wakeup_end(NodeId p) {
    auto& nd = node(p);
    nd.aux_live = false;
    nd.phase = Phase::Waiting;
    if (is_complete(p, nd.wait_op)) {
      finish_wait(p, nd.wait_op);
      return;
    }
    set_state(p, wait_state());
  }

  void on_done(NodeId p) {
    auto& nd = node(p);
    nd.running = false;
    nd.work = nd.end_work;
    nd.phase = Phase::Done;
    set_state(p, TraceState::Done);
    res_.done_time[static_cast<std::size_t>(p)] = now_;
    if (nd.trig_live) q_.cancel(nd.trig_ev);
    nd.trig_live = false;
    if (++done_ == n_) at(now_, EventKind::SimEnd, -1);
  }

  const CommPattern& pattern_;
  const SimConfig& cfg_;
  const SystemProfile& prof_;
  int n_ = 0;
  int done_ = 0;
  Seconds now_ = 0.0;
  EventQueue q_;
  std::vector<Node> nodes_;
  std::vector<std::vector<char>> posted_;
  SimResult res_;
};

}  // namespace

SimResult simulate(const CommPattern& pattern, const SimConfig& config) {
  config.profile.validate();
  config.ckpt.validate();
  if (config.failure) {
    if (config.failure->node < 0 || config.failure->node >= pattern.size()) {
      throw ValidationError(fmt::format("failure names unknown node {}", config.failure->node));
    }
    if (config.failure->time < 0.0 || config.failure->restart_duration < 0.0) {
      throw ValidationError("failure time and restart duration must be >= 0");
    }
  }
  return Engine(pattern, config).run();
}

}  // namespace ftsim
