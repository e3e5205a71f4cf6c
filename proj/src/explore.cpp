#include "dbesim/explore.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "dbesim/errors.hpp"

namespace dbesim {

namespace {

int floor_div8(int v) { return v >= 0 ? v / 8 : -((-v + 7) / 8); }

struct Segment {
  WindowRange range;
  int word;  // word offset relative to the block, in words
  int lo;
  int hi;
  int pixels() const { return hi - lo + 1; }
};

// Per (sample block, segment) facts.
struct SegmentFacts {
  bool stage_ok = false;   // can be fetched straight to the predictor
  bool capturable = false; // all pixels reach the buffer without a fetch
  bool refill_ok = false;  // can be fetched into the buffer
  int channel = 0;         // buffer * banks + bank
};

struct Sample {
  std::vector<SegmentFacts> facts;
  std::vector<int> free_cells;  // per channel
  int budget = 0;               // 0 = unlimited
};

bool capturable(const WindowSpec& spec, WindowRange r, int rel) {
  if (spec.span(r).contains(rel + kBlockWidth)) return true;
  return r != WindowRange::PrevLine && rel >= -2 * kBlockWidth && rel <= -1;
}

}  // namespace

ExplorerResult minimal_resident_set(const WindowSpec& spec, const ArchPreset& budget) {
  spec.validate();
  ArchPreset probe = budget;
  probe.window = spec;
  probe.residency = ResidencyPolicy::none(spec, budget.forwarding(), budget.reconvert_on_fetch());
  const bool forwarding = budget.forwarding();
  const bool reconvert = budget.reconvert_on_fetch();

  int lo_min = 0;
  int hi_max = -1;
  for (WindowRange r : kAllRanges) {
    lo_min = std::min(lo_min, spec.span(r).lo);
    hi_max = std::max(hi_max, spec.span(r).hi);
  }
  const int left_margin = (-lo_min + 7) / 8 + 2;
  const int right_margin = (hi_max + 1 + 7) / 8 + 1;
  const int nblocks = std::min(2 * (left_margin + right_margin) + 16, kLineWords);
  const GeometryPlan plan(ImageGeometry{nblocks * kBlockWidth, 4, Chroma::C444, 10},
                          SliceLayout{1, 1, Interleave::ColumnMajor});
  const Scheduler sch(plan, probe);

  std::vector<Segment> segments;
  for (WindowRange r : kAllRanges) {
    const Span& s = spec.span(r);
    for (int w = floor_div8(s.lo); w <= floor_div8(s.hi); ++w) {
      const int lo = std::max(s.lo, w * 8);
      const int hi = std::min(s.hi, w * 8 + 7);
      if (forwarding && r != WindowRange::PrevLine && w == -1) continue;
      segments.push_back(Segment{r, w, lo, hi});
    }
  }
  if (segments.size() > 24) throw ConfigError("window too wide for exhaustive exploration");

  const int nbank = probe.banks_per_buffer;
  const int nchan = probe.line_buffers * nbank;
  std::vector<Sample> samples;
  const int blockline = 1;
  for (int bx = 0; bx < plan.blocks_per_slice_line(); ++bx) {
    const int x0 = bx * kBlockWidth;
    if (x0 - 2 * kBlockWidth + lo_min < 0 || x0 + hi_max + kWordPixels >= plan.width()) continue;
    const std::int64_t h = plan.slot_of(0, bx, blockline);
    const std::int64_t slot = h - 1;
    const BlockSlotPlan sp = sch.plan_slot(slot);
    Sample smp;
    smp.budget = sp.fetch_budget;
    smp.free_cells.assign(static_cast<std::size_t>(nchan), 0);
    for (const FetchCell& c : sp.fetch_cells) ++smp.free_cells[static_cast<std::size_t>(c.buffer * nbank + c.bank)];
    for (const Segment& seg : segments) {
      SegmentFacts f;
      const int y = blockline * kBlockHeight + line_offset_of(seg.range);
      const int xw = x0 + seg.word * kWordPixels;
      const WordAddress a = sch.address(y, xw);
      f.channel = a.buffer_id * nbank + a.bank_id;
      const bool color_ok = seg.range == WindowRange::PrevLine || reconvert;
      const bool valid = sch.word_valid(y, xw, slot);
      f.stage_ok = budget.direct_fetch && color_ok && valid;
      f.refill_ok = color_ok && valid;
      f.capturable = true;
      for (int rel = seg.lo; rel <= seg.hi; ++rel) {
        f.capturable = f.capturable && capturable(spec, seg.range, rel);
      }
      smp.facts.push_back(f);
    }
    samples.push_back(std::move(smp));
  }
  if (samples.empty()) throw InfeasibleError("probe image has no steady-state blocks");

  const int nseg = static_cast<int>(segments.size());
  ExplorerResult best;
  best.resident_pixels = -1;
  std::uint32_t best_mask = 0;
  std::vector<int> used(static_cast<std::size_t>(nchan));
  const std::uint32_t limit = 1u << nseg;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    int cost = 0;
    for (int i = 0; i < nseg; ++i) {
      if (mask & (1u << i)) cost += segments[static_cast<std::size_t>(i)].pixels();
    }
    if (best.resident_pixels >= 0 && cost >= best.resident_pixels) continue;
    ++best.sets_evaluated;
    bool feasible = true;
    for (const Sample& smp : samples) {
      std::fill(used.begin(), used.end(), 0);
      int words = 0;
      for (int i = 0; i < nseg && feasible; ++i) {
        const SegmentFacts& f = smp.facts[static_cast<std::size_t>(i)];
        const bool resident = (mask & (1u << i)) != 0;
        bool fetch = false;
        if (resident) {
          if (!f.capturable) {
            if (!f.refill_ok) feasible = false;
            fetch = true;
          }
        } else {
          if (!f.stage_ok) feasible = false;
          fetch = true;
        }
        if (fetch && feasible) {
          ++words;
          if (++used[static_cast<std::size_t>(f.channel)] >
              smp.free_cells[static_cast<std::size_t>(f.channel)]) {
            feasible = false;
          }
        }
      }
      if (feasible && smp.budget > 0 && words > smp.budget) feasible = false;
      if (!feasible) break;
    }
    if (feasible) {
      best.resident_pixels = cost;
      best_mask = mask;
    }
  }
  if (best.resident_pixels < 0) {
    throw InfeasibleError("no resident set satisfies the fetch schedule, even full residency");
  }
  best.policy = ResidencyPolicy::none(spec, forwarding, reconvert);
  for (int i = 0; i < nseg; ++i) {
    if (!(best_mask & (1u << i))) continue;
    const Segment& seg = segments[static_cast<std::size_t>(i)];
    for (int rel = seg.lo; rel <= seg.hi; ++rel) best.policy.set_resident(seg.range, rel, true);
  }
  best.sample_blocks = static_cast<int>(samples.size());
  return best;
}

}  // namespace dbesim
