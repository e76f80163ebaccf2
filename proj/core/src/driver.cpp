#include "ftsim/driver.hpp"

#include <algorithm>

namespace ftsim {

ProjectedTimeline timeline_of(const SimResult& run) {
  ProjectedTimeline tl;
  tl.ops.resize(run.ops.size());
  for (std::size_t p = 0; p < run.ops.size(); ++p) {
    for (const auto& r : run.ops[p]) tl.ops[p].push_back({r.post, r.call, r.complete});
  }
  return tl;
}

namespace {

SimConfig base_config(const Scenario& s) {
  SimConfig cfg;
  cfg.profile = s.profile;
  cfg.ckpt = s.ckpt;
  cfg.horizon = s.horizon;
  return cfg;
}

PhaseEstimate phase_of(const Scenario& s, const SimResult& ref, const BlockEstimate& b) {
  const auto p = static_cast<std::size_t>(b.process);
  const auto& rec = ref.ops[p][static_cast<std::size_t>(b.op)];
  const Seconds tf = s.failure.time;

  int regular = 0;
  for (const auto& c : ref.checkpoints) {
    if (c.node == b.process && !c.anticipated && c.begin >= tf && c.begin < rec.call) ++regular;
  }

  PhaseEstimate est;
  est.node = b.process;
  est.block_op = b.op;
  est.phase_start = tf + ref.busy_at_failure[p];
  est.t_comp_fmax = std::max(0.0, s.pattern.op(b.process, b.op).wait_offset - ref.work_at_failure[p]);
  est.window = std::max(0.0, rec.complete - est.phase_start);
  est.anticipated_ckpt = rec.anticipated;
  est.n_ckpt = regular + (rec.anticipated ? 1 : 0);
  return est;
}

std::vector<NodeDirective> directives_for(const std::vector<NodePlan>& plans, const SimulationOutput& out,
                                          const SystemProfile& profile) {
  std::vector<NodeDirective> ds;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& est = out.estimates[i];
    const auto& rec = out.reference.ops[static_cast<std::size_t>(est.node)][static_cast<std::size_t>(est.block_op)];
    NodeDirective d;
    d.node = est.node;
    d.compute_freq = profile.index_of(plans[i].compute.ghz);
    d.wait_action = plans[i].wait_action;
    d.block_op = est.block_op;
    d.block_time = rec.call;
    d.release = rec.complete;
    d.anticipate = est.anticipated_ckpt;
    ds.push_back(d);
  }
  return ds;
}

}  // namespace

SimulationOutput run_simulation(const Scenario& s) {
  SimulationOutput out;
  const auto mode = s.pattern.wait_mode;

  SimConfig ff_cfg = base_config(s);
  out.failure_free = simulate(s.pattern, ff_cfg);

  SimConfig ref_cfg = base_config(s);
  ref_cfg.failure = s.failure;
  out.reference = simulate(s.pattern, ref_cfg);
  out.reference_makespan = out.reference.makespan;

  out.blocks = estimate_block_times(s.pattern, timeline_of(out.failure_free), s.failure.node, s.failure.time, s.depth);

  std::vector<NodePlan> baseline;
  for (const auto& b : out.blocks) {
    const auto& rec = out.reference.ops[static_cast<std::size_t>(b.process)][static_cast<std::size_t>(b.op)];
    if (rec.complete == kNever) continue;
    out.estimates.push_back(phase_of(s, out.reference, b));
    baseline.push_back(evaluate_plan(out.estimates.back(), s.profile, mode, s.profile.fmax(), WaitAction::None));
  }

  auto emit_reference = [&](Fallback why) {
    out.fallback = why;
    out.trace = out.reference.trace;
    out.makespan = out.reference.makespan;
    out.report = make_report(baseline, s.profile);
  };

  if (!s.strategies_enabled) {
    emit_reference(Fallback::None);
    return out;
  }

  std::vector<NodePlan> plans;
  for (const auto& est : out.estimates) plans.push_back(node_best_plan(est, s.profile, mode));

  auto attempt = [&](const std::vector<NodePlan>& candidate) {
    SimConfig cfg = ref_cfg;
    cfg.directives = directives_for(candidate, out, s.profile);
    SimResult run = simulate(s.pattern, cfg);
    if (run.makespan > out.reference_makespan) return false;
    out.trace = std::move(run.trace);
    out.makespan = run.makespan;
    out.report = make_report(candidate, s.profile);
    return true;
  };

  if (attempt(plans)) return out;

  std::vector<NodePlan> at_fmax;
  for (const auto& est : out.estimates) at_fmax.push_back(best_plan_at(est, s.profile, mode, s.profile.fmax()));
  if (attempt(at_fmax)) {
    out.fallback = Fallback::ComputeAtFmax;
    return out;
  }
  emit_reference(Fallback::Dropped);
  return out;
}

}  // namespace ftsim
