#include "ftsim/checkpoint.hpp"

#include "ftsim/errors.hpp"

namespace ftsim {

Seconds CheckpointPolicy::offset_for(NodeId process) const {
  if (process >= 0 && static_cast<std::size_t>(process) < phase_offsets.size()) {
    return phase_offsets[static_cast<std::size_t>(process)];
  }
  return 0.0;
}

void CheckpointPolicy::validate() const {
  if (!(duration > 0.0) || !(duration < interval)) {
    throw ValidationError("checkpoint: requires 0 < duration < interval");
  }
  if (!(alpha > 0.0) || alpha > 1.0) throw ValidationError("checkpoint: alpha must be in (0, 1]");
  for (Seconds o : phase_offsets) {
    if (o < 0.0) throw ValidationError("checkpoint: phase offsets must be >= 0");
  }
}

std::vector<Seconds> checkpoint_times(const CheckpointPolicy& policy, NodeId process, Seconds horizon) {
  std::vector<Seconds> out;
  const Seconds first = policy.offset_for(process);
  for (long k = 0;; ++k) {
    const Seconds t = first + static_cast<Seconds>(k) * policy.interval;
    if (t > horizon) break;
    out.push_back(t);
  }
  return out;
}

bool should_anticipate(const CheckpointPolicy& policy, Seconds block_time, Seconds last_ckpt) {
  if (!policy.anticipation_enabled) return false;
  const Seconds elapsed = block_time - last_ckpt;
  return elapsed > 0.0 && elapsed >= policy.alpha * policy.interval;
}

Seconds recovery_end(const FailureSpec& spec, Seconds last_ckpt) {
  return spec.time + spec.restart_duration + (spec.time - last_ckpt);
}

}  // namespace ftsim
