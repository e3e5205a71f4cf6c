#pragma once

#include <cstdint>

#include "dbesim/predwindow.hpp"
#include "dbesim/sched.hpp"

namespace dbesim {

struct ExplorerResult {
  int resident_pixels = 0;
  ResidencyPolicy policy;
  std::int64_t sets_evaluated = 0;
  int sample_blocks = 0;
};

/// Smallest resident set (word-granular per window section) for which every
/// steady-state block of a small single-slice probe image gets each window
/// pixel from residency, forwarding, or a conflict-free fetch in the slot
/// before it is needed. Only the schedule fields of `budget` are used.
/// Throws InfeasibleError when even full residency cannot be refilled.
ExplorerResult minimal_resident_set(const WindowSpec& spec, const ArchPreset& budget);

}  // namespace dbesim
