#include "ftsim/energy.hpp"

#include "ftsim/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace ftsim {

std::string_view to_string(WaitAction a) noexcept {
  switch (a) {
    case WaitAction::None: return "NONE";
    case WaitAction::MinFreq: return "MIN_FREQ";
    case WaitAction::Sleep: return "SLEEP";
  }
  return "NONE";
}

Seconds PhaseEstimate::busy_time(const FrequencyLevel& f, const SystemProfile& profile) const noexcept {
  return t_comp_fmax * f.beta + static_cast<double>(n_ckpt) * profile.t_ckpt * f.gamma;
}

bool PhaseEstimate::fits(const FrequencyLevel& f, const SystemProfile& profile) const noexcept {
  return busy_time(f, profile) <= window;
}

Seconds PhaseEstimate::wait_at(const FrequencyLevel& f, const SystemProfile& profile) const noexcept {
  return std::max(0.0, window - busy_time(f, profile));
}

Seconds t_comp(const FrequencyLevel& f, const PhaseEstimate& est) { return est.t_comp_fmax * f.beta; }

Joules compute_phase_energy(const FrequencyLevel& f, const PhaseEstimate& est, const SystemProfile& profile) {
  return t_comp(f, est) * f.p_comp + static_cast<double>(est.n_ckpt) * (profile.t_ckpt * f.gamma) * f.p_ckpt;
}

Joules awake_wait_energy(const FrequencyLevel& f, Seconds t_wait, WaitMode mode, const SystemProfile& profile) {
  return mode == WaitMode::Active ? t_wait * f.p_active_wait : t_wait * profile.p_idle_wait;
}

Joules sleep_wait_energy(Seconds t_wait, const SystemProfile& profile) {
  const Seconds transitions = profile.t_go_sleep + profile.t_wakeup;
  if (t_wait < transitions) {
    throw WaitTooShort(fmt::format("wait of {} s cannot hold {} s of sleep transitions", t_wait, transitions));
  }
  const Seconds t_sleep = t_wait - transitions;
  return profile.t_go_sleep * profile.p_go_sleep + t_sleep * profile.p_sleep + profile.t_wakeup * profile.p_wakeup;
}

bool sleep_feasible(const FrequencyLevel& /*f*/, Seconds t_wait, WaitMode mode, const SystemProfile& profile) {
  if (!(t_wait > profile.mu1 * (profile.t_go_sleep + profile.t_wakeup))) return false;
  if (t_wait < profile.t_go_sleep + profile.t_wakeup) return false;
  return sleep_wait_energy(t_wait, profile) < profile.mu2 * awake_wait_energy(profile.fmin(), t_wait, mode, profile);
}

namespace {

Joules wait_energy(const FrequencyLevel& f, Seconds t_wait, WaitMode mode, const SystemProfile& profile,
                   WaitAction action) {
  switch (action) {
    case WaitAction::None: return awake_wait_energy(f, t_wait, mode, profile);
    case WaitAction::MinFreq: return awake_wait_energy(profile.fmin(), t_wait, mode, profile);
    case WaitAction::Sleep: return sleep_wait_energy(t_wait, profile);
  }
  return 0.0;
}

void fill_savings(NodePlan& plan) {
  plan.saving_j = plan.eni_j - plan.ei_j;
  plan.saving_pct = plan.eni_j > 0.0 ? 100.0 * plan.saving_j / plan.eni_j : 0.0;
  plan.rate_j_s = plan.tt > 0.0 ? plan.saving_j / plan.tt : 0.0;
}

}  // namespace

NodePlan evaluate_plan(const PhaseEstimate& est, const SystemProfile& profile, WaitMode mode,
                       const FrequencyLevel& f, WaitAction action) {
  const auto& fmax = profile.fmax();
  NodePlan plan;
  plan.node = est.node;
  plan.compute = f;
  plan.wait_action = action;
  plan.eni_j = compute_phase_energy(fmax, est, profile) +
               awake_wait_energy(fmax, est.wait_at(fmax, profile), mode, profile);
  plan.t_comp = est.busy_time(f, profile);
  plan.t_wait = est.wait_at(f, profile);
  plan.tt = plan.t_comp + plan.t_wait;
  plan.ei_j = compute_phase_energy(f, est, profile) + wait_energy(f, plan.t_wait, mode, profile, action);
  fill_savings(plan);
  return plan;
}

NodePlan best_plan_at(const PhaseEstimate& est, const SystemProfile& profile, WaitMode mode,
                      const FrequencyLevel& f) {
  const Seconds tw = est.wait_at(f, profile);
  WaitAction action = WaitAction::None;
  if (sleep_feasible(f, tw, mode, profile)) {
    action = WaitAction::Sleep;
  } else if (mode == WaitMode::Active &&
             awake_wait_energy(profile.fmin(), tw, mode, profile) < awake_wait_energy(f, tw, mode, profile)) {
    action = WaitAction::MinFreq;
  }
  return evaluate_plan(est, profile, mode, f, action);
}

NodePlan node_best_plan(const PhaseEstimate& est, const SystemProfile& profile, WaitMode mode) {
  NodePlan best = evaluate_plan(est, profile, mode, profile.fmax(), WaitAction::None);
  bool have = false;
  for (const auto& f : profile.freqs) {
    if (!est.fits(f, profile)) continue;
    NodePlan candidate = best_plan_at(est, profile, mode, f);
    if (!have || candidate.ei_j < best.ei_j) {
      best = candidate;
      have = true;
    }
  }
  return best;
}

Joules total_saving(std::span<const NodePlan> plans) {
  return std::accumulate(plans.begin(), plans.end(), 0.0,
                         [](Joules acc, const NodePlan& p) { return acc + p.saving_j; });
}

}  // namespace ftsim
