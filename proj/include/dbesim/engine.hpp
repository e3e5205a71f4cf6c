#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dbesim/geometry.hpp"
#include "dbesim/oracle.hpp"
#include "dbesim/predwindow.hpp"
#include "dbesim/report.hpp"
#include "dbesim/sched.hpp"

namespace dbesim {

struct WordCorruption {
  int buffer = 0;
  int bank = 0;
  int word = 0;  // bank-local index
  std::int64_t cycle = 0;
  bool operator==(const WordCorruption&) const = default;
};

/// Structural changes applied on top of the architecture for negative tests.
struct FaultSpec {
  std::optional<int> recon_capacity;
  std::optional<int> line_buffers;
  std::optional<LineDelay> line_delay;
  std::optional<int> banks_per_buffer;  // physical banks; the fetch planner keeps the preset's view
  std::optional<bool> forwarding;
  bool extra_fetch = false;             // one more PredictFetch per slot, on a write port
  std::vector<WordCorruption> corrupt_words;

  bool empty() const {
    return !recon_capacity && !line_buffers && !line_delay && !banks_per_buffer && !forwarding &&
           !extra_fetch && corrupt_words.empty();
  }
  bool operator==(const FaultSpec&) const = default;
};

struct SimConfig {
  ImageGeometry image;
  SliceLayout slices;
  ArchPreset arch = ArchPreset::type2();
  double clock_mhz = 200.0;
  int throughput_ppc = 4;
  std::uint64_t seed = 0;
  int sram_read_latency = 0;  // 0 or 1 cycle
  FaultSpec faults;
  bool record_trace = false;

  void validate() const;
};

struct SimOutcome {
  SimReport report;
  AccessTrace trace;  // empty unless record_trace
};

/// Runs the full frame cycle by cycle and checks every invariant.
SimOutcome run_simulation(const SimConfig& cfg);

/// Returns a copy of `cfg` with `fault` merged into its fault list.
/// Throws ConfigError for out-of-range targets.
SimConfig inject_fault(const SimConfig& cfg, const FaultSpec& fault);

/// The architecture actually simulated: preset with structural faults applied.
ArchPreset effective_arch(const SimConfig& cfg);

struct DisplayPixels {
  std::int64_t cycle = 0;
  int x = 0;
  int y = 0;
  std::array<std::optional<PixelValue>, 4> pixels;  // nullopt = nothing valid on the bus
};

struct OutputCheck {
  std::int64_t mismatches = 0;  // pixels
  std::int64_t order_violations = 0;
  std::int64_t rate_violations = 0;
  std::int64_t pixels = 0;
  bool ok() const { return mismatches == 0 && order_violations == 0 && rate_violations == 0; }
};

/// Streaming display check: raster order, one 4-pixel group per cycle from
/// `latency` on, and pixel values equal to the oracle.
class OutputChecker {
 public:
  OutputChecker(const GeometryPlan& plan, const GoldenOracle& oracle, std::int64_t latency);
  void consume(const DisplayPixels& ev);
  /// Counts missing groups at the end of the frame as rate violations.
  OutputCheck finish();
  const OutputCheck& state() const { return check_; }

 private:
  const GeometryPlan* plan_;
  const GoldenOracle* oracle_;
  std::int64_t latency_;
  std::int64_t next_group_ = 0;
  OutputCheck check_;
};

OutputCheck verify_output(const std::vector<DisplayPixels>& stream, const GeometryPlan& plan,
                          const GoldenOracle& oracle, std::int64_t latency);

struct ServedPixel {
  WindowPixel where;
  std::optional<PixelValue> value;  // nullopt = unavailable at the need point
};

struct PredictionCheck {
  std::int64_t misses = 0;
  std::int64_t mismatches = 0;
  bool ok() const { return misses == 0 && mismatches == 0; }
};

PredictionCheck verify_prediction(const std::vector<ServedPixel>& served,
                                  const GoldenOracle& oracle);

}  // namespace dbesim
