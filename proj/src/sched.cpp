#include "dbesim/sched.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "dbesim/errors.hpp"

namespace dbesim {

ArchPreset ArchPreset::baseline(const WindowSpec& window) {
  ArchPreset p;
  p.name = PresetName::Baseline;
  p.line_delay = LineDelay::OneLine;
  p.line_buffers = 3;
  p.banks_per_buffer = 1;
  p.bank_rule = BankRule::None;
  p.fetch_offsets = {2};
  p.fetch_words_per_slot = 1;
  p.direct_fetch = false;
  p.window = window;
  p.residency = ResidencyPolicy::full(window, false, false);
  p.recon_capacity = p.residency.resident_count();
  return p;
}

ArchPreset ArchPreset::type1(const WindowSpec& window) {
  ArchPreset p = baseline(window);
  p.name = PresetName::Type1;
  p.line_delay = LineDelay::HalfLine;
  p.line_buffers = 2;
  p.residency = ResidencyPolicy::full(window, true, false);
  p.recon_capacity = p.residency.resident_count();
  return p;
}

ArchPreset ArchPreset::type2(const WindowSpec& window) {
  ArchPreset p = type1(window);
  p.name = PresetName::Type2;
  p.banks_per_buffer = 2;
  p.bank_rule = BankRule::ByBlockParity;
  p.fetch_offsets = {0, 1, 2, 3};
  p.fetch_words_per_slot = 0;
  p.direct_fetch = true;
  // Previous-line pixels left of the block are overwritten by the current lower
  // row, so they stay resident; two more words cover the lower-buffer bank
  // shortfall while both output reads hit that buffer.
  const Span& prev = window.prev_line;
  const int hi = std::min(prev.hi, 2 * kWordPixels - 1);
  std::vector<ResidencyPolicy::Run> runs;
  if (prev.lo <= hi) runs.push_back({WindowRange::PrevLine, prev.lo, hi});
  p.residency = ResidencyPolicy::from_runs(window, runs, true, true);
  p.recon_capacity = p.residency.resident_count();
  return p;
}

ArchPreset ArchPreset::by_name(PresetName name, const WindowSpec& window) {
  switch (name) {
    case PresetName::Baseline: return baseline(window);
    case PresetName::Type1: return type1(window);
    case PresetName::Type2: return type2(window);
    case PresetName::Custom: break;
  }
  throw ConfigError("custom presets have no factory defaults");
}

void ArchPreset::validate() const {
  window.validate();
  if (line_buffers != 2 && line_buffers != 3) throw ConfigError("line_buffers must be 2 or 3");
  if (banks_per_buffer != 1 && banks_per_buffer != 2) {
    throw ConfigError("banks_per_buffer must be 1 or 2");
  }
  if ((bank_rule == BankRule::ByBlockParity) != (banks_per_buffer == 2)) {
    throw ConfigError("bank_rule by_block_parity requires exactly 2 banks per buffer");
  }
  for (int off : fetch_offsets) {
    if (off < 0 || off >= kCyclesPerSlot) throw ConfigError("fetch offset outside 0..3");
  }
  if (fetch_words_per_slot < 0) throw ConfigError("fetch_words_per_slot must be >= 0");
  if (recon_capacity < 0) throw ConfigError("recon_capacity must be >= 0");
  for (WindowRange r : kAllRanges) {
    const auto i = static_cast<std::size_t>(r);
    if (residency.base[i] != window.span(r).lo ||
        static_cast<int>(residency.resident[i].size()) != window.span(r).size()) {
      throw ConfigError("residency policy does not match the window spec");
    }
  }
}

std::string to_string(PresetName n) {
  switch (n) {
    case PresetName::Baseline: return "Baseline";
    case PresetName::Type1: return "Type1";
    case PresetName::Type2: return "Type2";
    case PresetName::Custom: return "Custom";
  }
  return "?";
}

std::string to_string(LineDelay d) { return d == LineDelay::OneLine ? "one_line" : "half_line"; }

PresetName preset_from_string(const std::string& s) {
  if (s == "Baseline" || s == "baseline") return PresetName::Baseline;
  if (s == "Type1" || s == "type1") return PresetName::Type1;
  if (s == "Type2" || s == "type2") return PresetName::Type2;
  if (s == "Custom" || s == "custom") return PresetName::Custom;
  throw ConfigError("unknown preset '" + s + "'");
}

Scheduler::Scheduler(const GeometryPlan& plan, const ArchPreset& preset, int read_latency)
    : plan_(plan), preset_(preset), read_latency_(read_latency) {
  preset_.validate();
  if (read_latency < 0 || read_latency > 1) throw ConfigError("sram_read_latency must be 0 or 1");
  const std::int64_t blockline_cycles =
      static_cast<std::int64_t>(plan.blocks_per_blockline()) * kCyclesPerSlot;
  latency_ = preset.line_delay == LineDelay::OneLine ? blockline_cycles : blockline_cycles / 2;
  const std::int64_t pixels = static_cast<std::int64_t>(plan.width()) * plan.height();
  total_cycles_ = pixels / 4 + latency_;
  output_words_ = pixels / kWordPixels;
}

int Scheduler::buffer_for_line(int y) const {
  if (y % 2 == 0) return 0;
  if (preset_.line_buffers == 3) return 1 + (y / 2) % 2;
  return 1;
}

WordAddress Scheduler::address(int y, int x) const {
  const int s = plan_.slice_of_x(x);
  WordAddress a = pixel_to_word(x, y % 2 == 0 ? LineRole::Upper : LineRole::Lower, plan_, s);
  a.buffer_id = buffer_for_line(y);
  a.bank_id = bank_for_word(a.word_index);
  return a;
}

std::int64_t Scheduler::write_slot(int y, int x) const {
  return plan_.block_of_pixel(x, y).global_block_index;
}

std::int64_t Scheduler::overwrite_slot(int y, int x) const {
  const int buf = buffer_for_line(y);
  for (int y2 = y + 1; y2 < plan_.height(); ++y2) {
    if (buffer_for_line(y2) == buf) return write_slot(y2, x);
  }
  return std::numeric_limits<std::int64_t>::max();
}

std::optional<OutputRead> Scheduler::output_read_at(std::int64_t cycle) const {
  const std::int64_t t = cycle - (latency_ - 1);
  if (t < 0 || t % 2 != 0) return std::nullopt;
  const std::int64_t q = t / 2;
  if (q >= output_words_) return std::nullopt;
  const int words_per_line = plan_.width() / kWordPixels;
  return OutputRead{q, static_cast<int>(q % words_per_line) * kWordPixels,
                    static_cast<int>(q / words_per_line)};
}

BlockSlotPlan Scheduler::plan_slot(std::int64_t slot) const {
  BlockSlotPlan out;
  out.slot = slot;
  out.fetch_budget = preset_.fetch_words_per_slot;
  const std::int64_t base = slot * kCyclesPerSlot;
  const int nbuf = preset_.line_buffers;
  const int nbank = preset_.banks_per_buffer;
  std::vector<std::array<bool, kCyclesPerSlot>> busy(static_cast<std::size_t>(nbuf * nbank));
  auto cell = [&](int buf, int bank, int off) -> bool& {
    return busy[static_cast<std::size_t>(buf * nbank + bank)][static_cast<std::size_t>(off)];
  };
  out.reserved.resize(static_cast<std::size_t>(nbuf));

  if (slot >= 0 && slot < plan_.total_blocks()) {
    const BlockCoord b = plan_.block_at(slot);
    out.block = b;
    const PixelRect rect = block_to_pixels(b, plan_);
    for (int row = 0; row < kBlockHeight; ++row) {
      const int y = rect.y0 + row;
      const WordAddress a = address(y, rect.x0);
      AccessRecord rec;
      rec.cycle = base;
      rec.slice = b.slice_col;
      rec.buffer = a.buffer_id;
      rec.bank = a.bank_id;
      rec.op = AccessOp::Write;
      rec.word = bank_local_index(a.word_index);
      rec.purpose = Purpose::WriteBlockRow;
      rec.block = slot;
      rec.line = y;
      out.cycles[0].push_back(rec);
      cell(a.buffer_id, a.bank_id, 0) = true;
    }
    for (auto& r : out.reserved) r[0] = Purpose::WriteBlockRow;
  }

  for (int off = 0; off < kCyclesPerSlot; ++off) {
    const auto rd = output_read_at(base + off);
    if (!rd) continue;
    const WordAddress a = address(rd->y, rd->x);
    AccessRecord rec;
    rec.cycle = base + off;
    rec.slice = plan_.slice_of_x(rd->x);
    rec.buffer = a.buffer_id;
    rec.bank = a.bank_id;
    rec.op = AccessOp::Read;
    rec.word = bank_local_index(a.word_index);
    rec.purpose = Purpose::OutputRead;
    rec.block = write_slot(rd->y, rd->x);
    rec.line = rd->y;
    out.cycles[static_cast<std::size_t>(off)].push_back(rec);
    cell(a.buffer_id, a.bank_id, off) = true;
    for (auto& r : out.reserved) {
      if (!r[static_cast<std::size_t>(off)]) r[static_cast<std::size_t>(off)] = Purpose::OutputRead;
    }
  }

  for (int off : preset_.fetch_offsets) {
    if (off + read_latency_ >= kCyclesPerSlot) continue;
    for (auto& r : out.reserved) {
      if (!r[static_cast<std::size_t>(off)]) r[static_cast<std::size_t>(off)] = Purpose::PredictFetch;
    }
    for (int buf = 0; buf < nbuf; ++buf) {
      for (int bank = 0; bank < nbank; ++bank) {
        if (!cell(buf, bank, off)) out.fetch_cells.push_back(FetchCell{off, buf, bank});
      }
    }
  }
  std::sort(out.fetch_cells.begin(), out.fetch_cells.end(),
            [](const FetchCell& a, const FetchCell& b) {
              return std::tie(a.offset, a.buffer, a.bank) < std::tie(b.offset, b.buffer, b.bank);
            });
  return out;
}

namespace {

void check_block(const BlockCoord& b, const Scheduler& sch) {
  const auto slot = sch.plan().slot_of(b.slice_col, b.block_x, b.blockline);
  if (slot != b.global_block_index) {
    throw RangeError("block coordinate inconsistent with the plan's decode order");
  }
}

}  // namespace

BlockSlotPlan plan_baseline(const BlockCoord& b, const Scheduler& sch) {
  check_block(b, sch);
  return sch.plan_slot(b.global_block_index);
}

BlockSlotPlan plan_type1(const BlockCoord& b, const Scheduler& sch, HalfPhase phase) {
  check_block(b, sch);
  if ((phase == HalfPhase::FirstHalf) != sch.first_half(b)) {
    throw std::invalid_argument("half-line phase does not match block position");
  }
  return sch.plan_slot(b.global_block_index);
}

BlockSlotPlan plan_type2(const BlockCoord& b, const Scheduler& sch) {
  check_block(b, sch);
  return sch.plan_slot(b.global_block_index);
}

std::vector<DisplayEvent> output_timeline(const Scheduler& sch) {
  std::vector<DisplayEvent> out;
  const int w = sch.plan().width();
  const std::int64_t pixels = static_cast<std::int64_t>(w) * sch.plan().height();
  out.reserve(static_cast<std::size_t>(pixels / 4));
  for (std::int64_t p = 0; p < pixels; p += 4) {
    out.push_back(DisplayEvent{sch.latency() + p / 4, static_cast<int>(p % w),
                               static_cast<int>(p / w)});
  }
  return out;
}

}  // namespace dbesim
