#pragma once

#include "ftsim/event_queue.hpp"

#include <string>
#include <vector>

namespace ftsim {

using Watts = double;
using Joules = double;

enum class WaitMode { Active, Idle };

/// One P-state row: application and checkpoint power plus slowdowns.
struct FrequencyLevel {
  double ghz = 0.0;
  Watts p_comp = 0.0;
  double beta = 1.0;
  Watts p_ckpt = 0.0;
  double gamma = 1.0;
  Watts p_active_wait = 0.0;

  bool operator==(const FrequencyLevel&) const = default;
};

/// Node-level energy constants. `freqs` is sorted by descending frequency,
/// so freqs.front() is f_max and freqs.back() is f_min.
struct SystemProfile {
  std::vector<FrequencyLevel> freqs;
  Seconds t_go_sleep = 25.0;
  Seconds t_wakeup = 5.0;
  Watts p_go_sleep = 51.0;
  Watts p_wakeup = 91.0;
  Watts p_sleep = 12.0;
  Watts p_idle_wait = 60.0;
  double mu1 = 2.0;
  double mu2 = 0.9;
  Seconds t_ckpt = 120.0;

  const FrequencyLevel& fmax() const { return freqs.front(); }
  const FrequencyLevel& fmin() const { return freqs.back(); }

  /// Index of the row with exactly this frequency; UnknownFrequency otherwise.
  std::size_t index_of(double ghz) const;
  bool contains(const FrequencyLevel& f) const;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  bool operator==(const SystemProfile&) const = default;
};

/// Xeon E5-2630 characterization (2.8 to 1.2 GHz) with the sleep, wake and
/// base-power constants used across the shipped scenarios. Active-wait power
/// defaults to the application power of each row.
SystemProfile reference_profile();

/// "2.1" style label: shortest decimal form, at most three decimals.
std::string format_ghz(double ghz);

std::string_view to_string(WaitMode mode) noexcept;

}  // namespace ftsim
