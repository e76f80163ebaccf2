#pragma once

#include "ftsim/cascade.hpp"
#include "ftsim/energy.hpp"
#include "ftsim/report.hpp"
#include "ftsim/scenario.hpp"
#include "ftsim/simulator.hpp"

#include <vector>

namespace ftsim {

/// How much of the selected strategy survived the completion-time check.
enum class Fallback {
  None,
  /// Compute frequencies were reset to f_max; wait handling kept.
  ComputeAtFmax,
  /// Every node was left alone.
  Dropped,
};

struct SimulationOutput {
  SavingsReport report;
  /// Trace of the emitted run: the strategy run, or the reference run when
  /// strategies are disabled or dropped.
  std::vector<TraceRecord> trace;
  std::vector<BlockEstimate> blocks;
  std::vector<PhaseEstimate> estimates;
  Fallback fallback = Fallback::None;
  Seconds makespan = 0.0;
  Seconds reference_makespan = 0.0;
  /// Failure-free projection the cascade analysis is run against.
  SimResult failure_free;
  /// No-strategy run with the failure: the deadline and the energy baseline.
  SimResult reference;
};

/// Simulates the scenario, estimates the blocked phases at the failure,
/// picks and applies per-node strategies, and reports the savings.
SimulationOutput run_simulation(const Scenario& s);

/// Failure-free operation times as seen by a simulation.
ProjectedTimeline timeline_of(const SimResult& run);

}  // namespace ftsim
