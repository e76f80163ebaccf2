#pragma once

#include "ftsim/power_profile.hpp"

#include <span>
#include <string>
#include <vector>

namespace ftsim {

enum class WaitAction { None, MinFreq, Sleep };

std::string_view to_string(WaitAction a) noexcept;

/// Compute/wait phase estimate of one surviving node, taken at failure time.
///
/// The intervention interval starts at `phase_start` (the failure) and lasts
/// `window` seconds, ending when the failure-induced wait is released in the
/// reference run. The compute phase at f_max is `t_comp_fmax` seconds of
/// application work plus `n_ckpt` checkpoints; whatever remains of the window
/// is waiting.
struct PhaseEstimate {
  NodeId node = -1;
  Seconds phase_start = 0.0;
  Seconds t_comp_fmax = 0.0;
  Seconds window = 0.0;
  int n_ckpt = 0;
  /// The last of the n_ckpt checkpoints is taken ahead of the blocking wait.
  bool anticipated_ckpt = false;
  /// Program index of the operation the node blocks on.
  int block_op = -1;

  Seconds reference_end() const noexcept { return phase_start + window; }

  /// Compute phase including checkpoints when running at `f`.
  Seconds busy_time(const FrequencyLevel& f, const SystemProfile& profile) const noexcept;
  /// The compute phase at `f` still finishes inside the window.
  bool fits(const FrequencyLevel& f, const SystemProfile& profile) const noexcept;
  /// T_wait(f): what is left of the window, never below zero.
  Seconds wait_at(const FrequencyLevel& f, const SystemProfile& profile) const noexcept;
};

struct NodePlan {
  NodeId node = -1;
  FrequencyLevel compute{};
  WaitAction wait_action = WaitAction::None;
  Joules eni_j = 0.0;
  Joules ei_j = 0.0;
  Joules saving_j = 0.0;
  double rate_j_s = 0.0;
  double saving_pct = 0.0;
  /// Compute phase at the chosen frequency, checkpoints included.
  Seconds t_comp = 0.0;
  Seconds t_wait = 0.0;
  Seconds tt = 0.0;

  bool compute_changed(const SystemProfile& profile) const { return compute.ghz != profile.fmax().ghz; }
};

Seconds t_comp(const FrequencyLevel& f, const PhaseEstimate& est);

Joules compute_phase_energy(const FrequencyLevel& f, const PhaseEstimate& est, const SystemProfile& profile);

Joules awake_wait_energy(const FrequencyLevel& f, Seconds t_wait, WaitMode mode, const SystemProfile& profile);

/// Go to sleep, sleep, wake up. Throws WaitTooShort when the wait cannot
/// hold both transitions.
Joules sleep_wait_energy(Seconds t_wait, const SystemProfile& profile);

bool sleep_feasible(const FrequencyLevel& f, Seconds t_wait, WaitMode mode, const SystemProfile& profile);

/// Minimum-energy plan for one node among all compute frequencies that keep
/// the compute phase inside the window, each paired with the cheapest wait
/// handling. Ties go to the higher frequency, then to the lighter action.
NodePlan node_best_plan(const PhaseEstimate& est, const SystemProfile& profile, WaitMode mode);

/// Plan for a fixed compute frequency and wait action, with its energies.
/// Used for baselines and for restricted re-planning.
NodePlan evaluate_plan(const PhaseEstimate& est, const SystemProfile& profile, WaitMode mode,
                       const FrequencyLevel& f, WaitAction action);

/// Cheapest wait handling for a compute phase run at `f`.
NodePlan best_plan_at(const PhaseEstimate& est, const SystemProfile& profile, WaitMode mode,
                      const FrequencyLevel& f);

Joules total_saving(std::span<const NodePlan> plans);

}  // namespace ftsim
