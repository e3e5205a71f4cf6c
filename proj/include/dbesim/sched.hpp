#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dbesim/geometry.hpp"
#include "dbesim/membank.hpp"
#include "dbesim/predwindow.hpp"

namespace dbesim {

enum class PresetName { Baseline, Type1, Type2, Custom };
enum class LineDelay { OneLine, HalfLine };
enum class BankRule { None, ByBlockParity };

/// One DBE memory architecture. Baseline/Type1/Type2 come from the factories;
/// Custom presets are assembled field by field (usually from a config file).
struct ArchPreset {
  PresetName name = PresetName::Custom;
  LineDelay line_delay = LineDelay::OneLine;
  int line_buffers = 3;  // 3 = upper + ping-pong lower pair, 2 = upper + lower
  int banks_per_buffer = 1;
  BankRule bank_rule = BankRule::None;
  std::vector<int> fetch_offsets{2};  // slot cycles open to PredictFetch
  int fetch_words_per_slot = 1;       // 0 = unlimited
  bool direct_fetch = false;          // fetched words may feed the predictor without residency
  int recon_capacity = 106;           // pixels per slice column
  WindowSpec window;
  ResidencyPolicy residency;

  bool forwarding() const { return residency.forwarding_enabled; }
  bool reconvert_on_fetch() const { return residency.reconvert_on_fetch; }

  static ArchPreset baseline(const WindowSpec& window = {});
  static ArchPreset type1(const WindowSpec& window = {});
  static ArchPreset type2(const WindowSpec& window = {});
  static ArchPreset by_name(PresetName name, const WindowSpec& window = {});

  void validate() const;
};

std::string to_string(PresetName n);
std::string to_string(LineDelay d);
PresetName preset_from_string(const std::string& s);

struct FetchCell {
  int offset = 0;
  int buffer = 0;
  int bank = 0;
};

/// Accesses of one 4-cycle block slot. Writes and output reads are fixed by the
/// architecture; prediction fetches are placed into `fetch_cells` by the engine.
struct BlockSlotPlan {
  std::int64_t slot = 0;
  std::optional<BlockCoord> block;
  std::array<std::vector<AccessRecord>, kCyclesPerSlot> cycles;
  std::vector<FetchCell> fetch_cells;
  int fetch_budget = 0;  // 0 = unlimited
  // reserved[buffer][offset]: purpose this cycle is set aside for, if any.
  std::vector<std::array<std::optional<Purpose>, kCyclesPerSlot>> reserved;
};

struct OutputRead {
  std::int64_t word_seq = 0;  // raster word number
  int x = 0;                  // first pixel
  int y = 0;
};

struct DisplayEvent {
  std::int64_t cycle = 0;
  int x = 0;  // first of 4 pixels
  int y = 0;
};

/// Per-architecture timing: where each line lives, when each word is written and
/// read, and which (buffer, bank, cycle) cells remain free for prediction fetches.
class Scheduler {
 public:
  Scheduler(const GeometryPlan& plan, const ArchPreset& preset, int read_latency = 0);

  const GeometryPlan& plan() const { return plan_; }
  const ArchPreset& preset() const { return preset_; }
  int read_latency() const { return read_latency_; }

  std::int64_t latency() const { return latency_; }
  std::int64_t total_cycles() const { return total_cycles_; }
  std::int64_t total_slots() const {
    return (total_cycles_ + kCyclesPerSlot - 1) / kCyclesPerSlot;
  }

  int buffer_for_line(int y) const;
  int bank_for_word(int word_index) const {
    return preset_.banks_per_buffer == 2 ? (word_index & 1) : 0;
  }
  int bank_depth() const { return kLineWords / preset_.banks_per_buffer; }
  int bank_local_index(int word_index) const {
    return preset_.banks_per_buffer == 2 ? (word_index >> 1) : word_index;
  }
  /// Address of the word holding pixel (x, y), including buffer and bank.
  WordAddress address(int y, int x) const;

  std::int64_t write_slot(int y, int x) const;
  /// Slot in which the word is overwritten by the next line sharing its buffer.
  std::int64_t overwrite_slot(int y, int x) const;
  /// Line y's data for the word at x can be read during `slot`.
  bool word_valid(int y, int x, std::int64_t slot) const {
    return write_slot(y, x) < slot && slot < overwrite_slot(y, x);
  }

  std::optional<OutputRead> output_read_at(std::int64_t cycle) const;
  bool first_half(const BlockCoord& b) const {
    return b.block_x < plan_.blocks_per_slice_line() / 2;
  }

  BlockSlotPlan plan_slot(std::int64_t slot) const;

 private:
  GeometryPlan plan_;
  ArchPreset preset_;
  int read_latency_;
  std::int64_t latency_ = 0;
  std::int64_t total_cycles_ = 0;
  std::int64_t output_words_ = 0;
};

enum class HalfPhase { FirstHalf, SecondHalf };

BlockSlotPlan plan_baseline(const BlockCoord& b, const Scheduler& sch);
BlockSlotPlan plan_type1(const BlockCoord& b, const Scheduler& sch, HalfPhase phase);
BlockSlotPlan plan_type2(const BlockCoord& b, const Scheduler& sch);

/// Display stream: one event per cycle from latency() on, 4 raster pixels each.
std::vector<DisplayEvent> output_timeline(const Scheduler& sch);

}  // namespace dbesim
