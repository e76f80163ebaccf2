#pragma once

#include "ftsim/cascade.hpp"
#include "ftsim/checkpoint.hpp"
#include "ftsim/comm_pattern.hpp"
#include "ftsim/power_profile.hpp"

#include <filesystem>
#include <string>

namespace ftsim {

struct Scenario {
  std::string name;
  int nodes = 0;
  SystemProfile profile;
  PatternSpec pattern_spec;
  /// Expanded from pattern_spec over the horizon.
  CommPattern pattern;
  CheckpointPolicy ckpt;
  FailureSpec failure;
  bool depth_auto = true;
  /// Resolved depth; equals pattern_depth(pattern) when depth_auto.
  DepthConfig depth;
  /// Application work per process, seconds at f_max.
  Seconds horizon = 0.0;
  bool strategies_enabled = true;

  bool operator==(const Scenario&) const = default;
};

/// Validates the scenario, expands its pattern and resolves the depth.
/// Call again after editing fields by hand. Throws ValidationError.
void finalize(Scenario& s);

/// Parses scenario text. `source` only labels error messages.
/// Throws ParseError or ValidationError.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");

/// Throws IoError when the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(write_scenario(s)) == s.
std::string write_scenario(const Scenario& s);

/// "90s", "1.5 min", "2h" or a bare number of seconds.
Seconds parse_duration(const std::string& text);

}  // namespace ftsim
