#include "ftsim/power_profile.hpp"

#include "ftsim/errors.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace ftsim {

std::size_t SystemProfile::index_of(double ghz) const {
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (freqs[i].ghz == ghz) return i;
  }
  throw UnknownFrequency(fmt::format("frequency {} GHz is not in the profile", ghz));
}

bool SystemProfile::contains(const FrequencyLevel& f) const {
  return std::find(freqs.begin(), freqs.end(), f) != freqs.end();
}

void SystemProfile::validate() const {
  if (freqs.empty()) throw ValidationError("profile: frequency table is empty");
  for (std::size_t i = 1; i < freqs.size(); ++i) {
    if (!(freqs[i].ghz < freqs[i - 1].ghz)) {
      throw ValidationError("profile: frequencies must be strictly descending");
    }
    if (freqs[i].beta < freqs[i - 1].beta || freqs[i].gamma < freqs[i - 1].gamma) {
      throw ValidationError("profile: beta and gamma must not decrease as frequency decreases");
    }
  }
  if (fmax().beta != 1.0 || fmax().gamma != 1.0) {
    throw ValidationError("profile: maximum-frequency row must have beta = gamma = 1");
  }
  for (const auto& f : freqs) {
    if (f.beta < 1.0 || f.gamma < 1.0) throw ValidationError("profile: beta and gamma must be >= 1");
    if (f.p_comp <= 0.0 || f.p_ckpt <= 0.0 || f.p_active_wait <= 0.0) {
      throw ValidationError("profile: powers must be positive");
    }
  }
  if (!(t_go_sleep > 0.0) || !(t_wakeup > 0.0)) {
    throw ValidationError("profile: t_go_sleep and t_wakeup must be > 0");
  }
  const auto min_comp = std::min_element(freqs.begin(), freqs.end(), [](auto& a, auto& b) {
                          return a.p_comp < b.p_comp;
                        })->p_comp;
  if (!(p_sleep < p_idle_wait) || !(p_idle_wait < min_comp)) {
    throw ValidationError("profile: requires p_sleep < p_idle_wait < min p_comp");
  }
  if (mu1 < 1.0) throw ValidationError("profile: mu1 must be >= 1");
  if (!(mu2 > 0.0) || mu2 > 1.0) throw ValidationError("profile: mu2 must be in (0, 1]");
  if (!(t_ckpt > 0.0)) throw ValidationError("profile: checkpoint duration must be > 0");
}

SystemProfile reference_profile() {
  SystemProfile p;
  p.freqs = {
      {2.8, 166.0, 1.0, 150.0, 1.0, 166.0},
      {2.1, 148.0, 1.2, 142.0, 1.1, 148.0},
      {1.7, 139.0, 1.5, 131.0, 1.2, 139.0},
      {1.2, 126.0, 2.1, 125.0, 1.4, 126.0},
  };
  return p;
}

std::string format_ghz(double ghz) {
  std::string s = fmt::format("{:.3f}", ghz);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string_view to_string(WaitMode mode) noexcept {
  return mode == WaitMode::Active ? "active" : "idle";
}

}  // namespace ftsim
