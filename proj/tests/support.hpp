#pragma once

#include "ftsim/errors.hpp"
#include "ftsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace ftsim::support {

inline std::filesystem::path scenario_dir() { return FTSIM_SCENARIO_DIR; }

inline std::filesystem::path fixture(const std::string& name) { return scenario_dir() / (name + ".scn"); }

inline std::vector<std::filesystem::path> fixtures() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(scenario_dir())) {
    if (e.path().extension() == ".scn") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Operation-free pattern of `nodes` processes for hand-built tests.
inline CommPattern empty_pattern(int nodes, Seconds interval = 100.0) {
  CommPattern p;
  p.processes.resize(static_cast<std::size_t>(nodes));
  p.interval = interval;
  return p;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double centis(double v) { return std::round(v * 100.0) / 100.0; }

/// A small random but valid scenario. Retries until finalize accepts it.
inline Scenario random_scenario(std::mt19937_64& rng) {
  for (;;) {
    Scenario s;
    s.name = "random";
    s.nodes = pick(rng, 2, 5);
    s.profile = reference_profile();
    s.profile.mu1 = pick(rng, 0, 1) ? 2.0 : 7.0;
    if (pick(rng, 0, 1)) s.profile.freqs.back().p_active_wait = 94.6;

    auto& ps = s.pattern_spec;
    const double intervals[] = {60.0, 300.0, 1296.0};
    ps.interval = intervals[pick(rng, 0, 2)];
    ps.mode = pick(rng, 0, 1) ? OpMode::Nonblocking : OpMode::Blocking;
    ps.buffered = pick(rng, 0, 3) == 0;
    ps.wait_mode = pick(rng, 0, 1) ? WaitMode::Idle : WaitMode::Active;
    if (ps.mode == OpMode::Nonblocking) ps.wait_lag = centis(uniform(rng, 0.5, ps.interval * 0.6));
    const int edges = pick(rng, 1, 2 * s.nodes);
    for (int i = 0; i < edges; ++i) {
      EdgeSpec e;
      e.src = pick(rng, 0, s.nodes - 1);
      e.dst = (e.src + pick(rng, 1, s.nodes - 1)) % s.nodes;
      e.offset = centis(uniform(rng, 0.0, ps.interval));
      ps.edges.push_back(e);
    }

    s.ckpt.interval = pick(rng, 0, 1) ? 3600.0 : centis(uniform(rng, 600.0, 3600.0));
    s.ckpt.duration = 120.0;
    s.ckpt.anticipation_enabled = pick(rng, 0, 1) == 1;
    for (int p = 0; p < s.nodes; ++p) s.ckpt.phase_offsets.push_back(centis(uniform(rng, 0.0, s.ckpt.interval)));

    s.failure.node = pick(rng, 0, s.nodes - 1);
    s.failure.time = centis(uniform(rng, 150.0, 3000.0));
    s.failure.restart_duration = centis(uniform(rng, 5.0, 400.0));
    s.horizon = 4000.0;
    s.depth_auto = true;
    try {
      finalize(s);
      return s;
    } catch (const ValidationError&) {
    }
  }
}

}  // namespace ftsim::support
