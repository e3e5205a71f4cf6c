#include "dbesim/engine.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "dbesim/errors.hpp"

namespace dbesim {

namespace {

constexpr int kRefillLookahead = 8;

std::uint64_t word_key(int y, int xw) {
  return (static_cast<std::uint64_t>(y) << 32) | static_cast<std::uint32_t>(xw);
}

int word_start(int x) { return x - x % kWordPixels; }

struct DecodedBlock {
  BlockCoord b;
  int x0 = 0;
  int y0 = 0;
  std::array<std::array<PixelValue, kBlockWidth>, kBlockHeight> rgb{};
  std::array<std::array<PixelValue, kBlockWidth>, kBlockHeight> ycc{};
  bool valid = false;
};

struct RefillDemand {
  WindowRange range;
  int y = 0;
  int xw = 0;
  std::vector<int> xs;  // resident pixels of the target block inside this word
  bool done = false;
};

struct BlockRefill {
  std::int64_t block = 0;
  BlockCoord coord;
  std::vector<RefillDemand> words;
};

struct RefillTarget {
  BlockCoord coord;
  WindowRange range;
};

struct FetchJob {
  int offset = 0;
  AccessRecord rec;  // physical
  int y = 0;
  int xw = 0;
  bool staged = false;
  std::vector<RefillTarget> refills;
};

struct OutEntry {
  std::int64_t q = 0;
  int x = 0;
  int y = 0;
  std::optional<WordData> data;
};

std::string describe(const Violation& v) {
  std::ostringstream os;
  const AccessRecord& a = v.access;
  os << "cycle " << a.cycle << ": " << to_string(v.kind) << " on buffer " << a.buffer << " bank "
     << a.bank << " word " << a.word << " (" << to_string(a.purpose);
  if (v.other) os << " vs " << to_string(v.other->purpose) << " of block " << v.other->block;
  os << ")";
  return os.str();
}

class Engine {
 public:
  explicit Engine(const SimConfig& cfg)
      : cfg_(cfg),
        arch_(effective_arch(cfg)),
        plan_(build_geometry(cfg.image, cfg.slices)),
        sch_(plan_, arch_, cfg.sram_read_latency),
        oracle_(cfg.seed, cfg.image.bit_depth),
        checker_(plan_, oracle_, sch_.latency()) {
    phys_banks_ = cfg.faults.banks_per_buffer.value_or(arch_.banks_per_buffer);
    if (phys_banks_ != 1 && phys_banks_ != 2) throw ConfigError("banks_per_buffer must be 1 or 2");
    const int depth = kLineWords / phys_banks_;
    for (int buf = 0; buf < arch_.line_buffers; ++buf) {
      for (int bank = 0; bank < phys_banks_; ++bank) banks_.emplace_back(buf, bank, depth);
    }
    if (cfg.record_trace) {
      for (auto& b : banks_) b.set_trace(&trace_);
    }
    for (const auto& c : cfg.faults.corrupt_words) {
      if (c.buffer < 0 || c.buffer >= arch_.line_buffers || c.bank < 0 || c.bank >= phys_banks_ ||
          c.word < 0 || c.word >= depth || c.cycle < 0) {
        throw ConfigError("corrupt_word target outside the line buffers");
      }
    }
    recon_.assign(static_cast<std::size_t>(plan_.columns()), ReconBuffer(arch_.recon_capacity));
    fwd_.resize(static_cast<std::size_t>(plan_.columns()));
  }

  SimOutcome run();

 private:
  const WindowSpec& spec() const { return arch_.window; }
  const ResidencyPolicy& policy() const { return arch_.residency; }
  bool resident_pos(WindowRange r, int rel) const {
    return spec().span(r).contains(rel) && policy().is_resident(r, rel) &&
           !policy().is_forwarded(r, rel);
  }

  int x0_of(const BlockCoord& b) const {
    return plan_.slice_base(b.slice_col) + b.block_x * kBlockWidth;
  }
  /// Some block bx in [first_bx, last_bx] of b's slice line keeps (r, x, y) resident.
  bool needed_by(const BlockCoord& b, int first_bx, int last_bx, WindowRange r, int x,
                 int y) const;
  bool needed_from(const BlockCoord& b, int first_bx, WindowRange r, int x, int y) const {
    return needed_by(b, first_bx, plan_.blocks_per_slice_line() - 1, r, x, y);
  }
  bool capturable(const BlockCoord& b, const WindowPixel& p) const;

  void decode(std::int64_t slot, const BlockCoord& b);
  void plan_fetches(std::int64_t slot, const BlockSlotPlan& sp);
  void extend_refills(std::int64_t h);
  bool assign(std::int64_t slot, const BlockSlotPlan& sp, int y, int xw, FetchJob** out);
  void run_cycle(std::int64_t cycle, int offset, const BlockSlotPlan& sp);
  void add_extra_fetch(std::int64_t slot, const BlockSlotPlan& sp, const BlockCoord& next);
  void deliver(const FetchJob& job, const StoredWord& data);
  void emit(std::int64_t cycle);
  void serve(std::int64_t h);

  std::pair<int, int> physical(const AccessRecord& logical) const {
    const int wi =
        arch_.banks_per_buffer == 2 ? logical.word * 2 + logical.bank : logical.word;
    return phys_banks_ == 2 ? std::pair{wi & 1, wi >> 1} : std::pair{0, wi};
  }
  SramBankModel& bank(int buffer, int b) {
    return banks_[static_cast<std::size_t>(buffer * phys_banks_ + b)];
  }
  void note(const std::string& s) { log_.note(s); }

  const SimConfig& cfg_;
  ArchPreset arch_;
  GeometryPlan plan_;
  Scheduler sch_;
  GoldenOracle oracle_;
  OutputChecker checker_;
  int phys_banks_ = 1;

  std::vector<SramBankModel> banks_;
  std::vector<ReconBuffer> recon_;
  std::vector<DecodedBlock> fwd_;
  std::unordered_map<std::uint64_t, WordData> staged_;
  std::deque<OutEntry> out_reg_;
  std::deque<BlockRefill> refills_;
  std::int64_t refill_next_ = 0;
  std::vector<FetchJob> jobs_;
  std::vector<int> fetch_cell_used_;
  int fetch_words_ = 0;

  ViolationLog log_;
  AccessTrace trace_;
  std::vector<WindowPixel> win_;
  std::vector<ServedPixel> served_;
  std::vector<AccessResult> results_;
  std::array<WordData, kBlockHeight> write_payload_{};

  std::int64_t served_resident_ = 0;
  std::int64_t served_forwarded_ = 0;
  std::int64_t served_fetched_ = 0;
  std::int64_t predict_fetches_ = 0;
};

bool Engine::needed_by(const BlockCoord& b, int first_bx, int last_bx, WindowRange r, int x,
                       int y) const {
  if (y != b.blockline * kBlockHeight + line_offset_of(r)) return false;
  if (r == WindowRange::PrevLine && plan_.is_slice_row_start(b.blockline)) return false;
  const int sb = plan_.slice_base(b.slice_col);
  if (x < sb || x >= sb + plan_.slice_width()) return false;
  const Span& span = spec().span(r);
  for (int bx = first_bx; bx <= last_bx; ++bx) {
    const int rel = x - (sb + bx * kBlockWidth);
    if (rel < span.lo) break;
    if (rel <= span.hi && resident_pos(r, rel)) return true;
  }
  return false;
}

// The pixel reaches the reconstruction buffer without a line-buffer read: it
// sits in the left neighbour's window, or in the forward register at the
// left neighbour's need point.
bool Engine::capturable(const BlockCoord& b, const WindowPixel& p) const {
  if (b.block_x == 0) return false;
  if (spec().span(p.range).contains(p.rel + kBlockWidth)) return true;
  return p.range != WindowRange::PrevLine && p.rel >= -2 * kBlockWidth;
}

void Engine::decode(std::int64_t slot, const BlockCoord& b) {
  DecodedBlock& d = fwd_[static_cast<std::size_t>(b.slice_col)];
  d.b = b;
  d.x0 = x0_of(b);
  d.y0 = b.blockline * kBlockHeight;
  d.valid = true;
  for (int row = 0; row < kBlockHeight; ++row) {
    for (int i = 0; i < kBlockWidth; ++i) {
      d.rgb[row][i] = oracle_.golden_rgb(d.x0 + i, d.y0 + row);
      d.ycc[row][i] = ycocg_from_rgb(d.rgb[row][i]);
    }
    write_payload_[static_cast<std::size_t>(row)] = d.rgb[row];
  }
  (void)slot;
  if (b.block_x + 1 >= plan_.blocks_per_slice_line()) return;
  // Pixels the right neighbour keeps resident go straight in.
  ReconBuffer& rb = recon_[static_cast<std::size_t>(b.slice_col)];
  const int next_x0 = d.x0 + kBlockWidth;
  for (int row = 0; row < kBlockHeight; ++row) {
    const WindowRange r = row == 0 ? WindowRange::CurRow0 : WindowRange::CurRow1;
    for (int i = 0; i < kBlockWidth; ++i) {
      if (resident_pos(r, d.x0 + i - next_x0)) rb.insert(r, d.x0 + i, d.y0 + row, d.ycc[row][i]);
    }
  }
}

void Engine::extend_refills(std::int64_t h) {
  while (!refills_.empty() && refills_.front().block < h) refills_.pop_front();
  if (refill_next_ < h) refill_next_ = h;
  const std::int64_t last = std::min(h + kRefillLookahead, plan_.total_blocks());
  std::vector<WindowPixel> win;
  for (; refill_next_ < last; ++refill_next_) {
    BlockRefill br;
    br.block = refill_next_;
    br.coord = plan_.block_at(refill_next_);
    window_pixels(spec(), br.coord, plan_, win);
    for (const auto& p : win) {
      if (!resident_pos(p.range, p.rel) || capturable(br.coord, p)) continue;
      const int xw = word_start(p.x);
      auto it = std::find_if(br.words.begin(), br.words.end(), [&](const RefillDemand& d) {
        return d.range == p.range && d.y == p.y && d.xw == xw;
      });
      if (it == br.words.end()) {
        br.words.push_back(RefillDemand{p.range, p.y, xw, {}, false});
        it = br.words.end() - 1;
      }
      it->xs.push_back(p.x);
    }
    refills_.push_back(std::move(br));
  }
}

bool Engine::assign(std::int64_t slot, const BlockSlotPlan& sp, int y, int xw, FetchJob** out) {
  for (auto& j : jobs_) {
    if (j.y == y && j.xw == xw) {
      *out = &j;
      return true;
    }
  }
  if (!sch_.word_valid(y, xw, slot)) return false;
  if (sp.fetch_budget > 0 && fetch_words_ >= sp.fetch_budget) return false;
  const WordAddress a = sch_.address(y, xw);
  for (std::size_t i = 0; i < sp.fetch_cells.size(); ++i) {
    const FetchCell& c = sp.fetch_cells[i];
    if (fetch_cell_used_[i] || c.buffer != a.buffer_id || c.bank != a.bank_id) continue;
    fetch_cell_used_[i] = 1;
    ++fetch_words_;
    FetchJob j;
    j.offset = c.offset;
    j.y = y;
    j.xw = xw;
    AccessRecord logical;
    logical.cycle = slot * kCyclesPerSlot + c.offset;
    logical.slice = plan_.slice_of_x(xw);
    logical.buffer = a.buffer_id;
    logical.bank = a.bank_id;
    logical.op = AccessOp::Read;
    logical.word = sch_.bank_local_index(a.word_index);
    logical.purpose = Purpose::PredictFetch;
    logical.block = slot + 1;
    logical.line = y;
    const auto [pb, pw] = physical(logical);
    j.rec = logical;
    j.rec.bank = pb;
    j.rec.word = pw;
    jobs_.push_back(std::move(j));
    *out = &jobs_.back();
    return true;
  }
  return false;
}

void Engine::plan_fetches(std::int64_t slot, const BlockSlotPlan& sp) {
  jobs_.clear();
  jobs_.reserve(32);
  fetch_cell_used_.assign(sp.fetch_cells.size(), 0);
  fetch_words_ = 0;
  const std::int64_t h = slot + 1;
  if (h >= plan_.total_blocks()) return;
  const BlockCoord next = plan_.block_at(h);
  FetchJob* job = nullptr;

  if (arch_.direct_fetch) {
    window_pixels(spec(), next, plan_, win_);
    for (const auto& p : win_) {
      if (policy().is_forwarded(p.range, p.rel) || resident_pos(p.range, p.rel)) continue;
      if (assign(slot, sp, p.y, word_start(p.x), &job)) job->staged = true;
    }
  }

  extend_refills(h);
  std::vector<int> pending(static_cast<std::size_t>(plan_.columns()), 0);
  for (auto& br : refills_) {
    ReconBuffer& rb = recon_[static_cast<std::size_t>(br.coord.slice_col)];
    int& pend = pending[static_cast<std::size_t>(br.coord.slice_col)];
    for (auto& d : br.words) {
      if (d.done) continue;
      const bool present = std::all_of(d.xs.begin(), d.xs.end(),
                                       [&](int x) { return rb.contains(d.range, x, d.y); });
      if (present) {
        d.done = true;
        continue;
      }
      const int size = static_cast<int>(d.xs.size());
      // Only a slice line's first block is prefetched ahead of its own slot;
      // later blocks find their words in the slot just before them.
      if (br.block > h &&
          (br.coord.block_x != 0 || rb.occupancy() + pend + size > rb.capacity())) {
        continue;
      }
      if (!assign(slot, sp, d.y, d.xw, &job)) continue;
      job->refills.push_back(RefillTarget{br.coord, d.range});
      pend += size;
      d.done = true;
    }
  }

  if (cfg_.faults.extra_fetch) add_extra_fetch(slot, sp, next);
  predict_fetches_ += static_cast<std::int64_t>(jobs_.size());
}

// Fault: one more previous-line word than the schedule provides for. It goes
// to a cycle where its bank is already busy (a fetch if there is one).
void Engine::add_extra_fetch(std::int64_t slot, const BlockSlotPlan& sp, const BlockCoord& next) {
  AccessRecord logical;
  if (!plan_.is_slice_row_start(next.blockline)) {
    const int y = next.blockline * kBlockHeight - 1;
    const int sb = plan_.slice_base(next.slice_col);
    const int xw =
        word_start(std::min(x0_of(next) + spec().prev_line.hi + 1, sb + plan_.slice_width() - 1));
    const WordAddress a = sch_.address(y, xw);
    logical.buffer = a.buffer_id;
    logical.bank = a.bank_id;
    logical.word = sch_.bank_local_index(a.word_index);
    logical.line = y;
  } else if (!sp.cycles[0].empty()) {
    logical = sp.cycles[0].front();
    logical.line = -1;
  } else {
    return;
  }
  int offset = -1;
  for (const auto& j : jobs_) {
    if (j.rec.buffer == logical.buffer && j.rec.bank == physical(logical).first) {
      offset = j.offset;
      break;
    }
  }
  for (int off = 0; off < kCyclesPerSlot && offset < 0; ++off) {
    for (const auto& r : sp.cycles[static_cast<std::size_t>(off)]) {
      if (r.buffer == logical.buffer && r.bank == logical.bank) offset = off;
    }
  }
  if (offset < 0) offset = arch_.fetch_offsets.empty() ? 0 : arch_.fetch_offsets.front();
  FetchJob j;
  j.offset = offset;
  j.rec = logical;
  j.rec.cycle = slot * kCyclesPerSlot + offset;
  j.rec.slice = next.slice_col;
  j.rec.op = AccessOp::Read;
  j.rec.purpose = Purpose::PredictFetch;
  j.rec.block = slot + 1;
  const auto [pb, pw] = physical(logical);
  j.rec.bank = pb;
  j.rec.word = pw;
  j.y = -1;
  j.xw = -1;
  jobs_.push_back(std::move(j));
}

void Engine::deliver(const FetchJob& job, const StoredWord& data) {
  if (job.y < 0) return;
  if (job.staged) staged_[word_key(job.y, job.xw)] = data.pixels;
  for (const auto& t : job.refills) {
    ReconBuffer& rb = recon_[static_cast<std::size_t>(t.coord.slice_col)];
    for (int i = 0; i < kWordPixels; ++i) {
      const int x = job.xw + i;
      if (rb.contains(t.range, x, job.y) ||
          !needed_by(t.coord, t.coord.block_x, t.coord.block_x, t.range, x, job.y)) {
        continue;
      }
      const PixelValue& px = data.pixels[static_cast<std::size_t>(i)];
      rb.insert(t.range, x, job.y,
                color_space_of(t.range) == ColorSpace::YCoCg ? ycocg_from_rgb(px) : px);
    }
  }
}

void Engine::run_cycle(std::int64_t cycle, int offset, const BlockSlotPlan& sp) {
  for (const auto& rec : sp.cycles[static_cast<std::size_t>(offset)]) {
    AccessRecord phys = rec;
    const auto [pb, pw] = physical(rec);
    phys.bank = pb;
    phys.word = pw;
    const WordData* payload = nullptr;
    if (rec.op == AccessOp::Write) {
      payload = &write_payload_[static_cast<std::size_t>(rec.line % kBlockHeight)];
    }
    bank(phys.buffer, pb).request_access(phys, payload);
  }
  for (const auto& j : jobs_) {
    if (j.offset == offset) bank(j.rec.buffer, j.rec.bank).request_access(j.rec);
  }

  for (auto& bk : banks_) {
    results_.clear();
    for (const auto& v : bk.commit_cycle(cycle, &results_)) {
      switch (v.kind) {
        case ViolationKind::Conflict: ++log_.counts.conflicts; break;
        case ViolationKind::Hazard: ++log_.counts.hazards; break;
        case ViolationKind::Underflow: ++log_.counts.underflows; break;
      }
      note(describe(v));
    }
    for (const auto& res : results_) {
      const AccessRecord& r = res.record;
      switch (r.purpose) {
        case Purpose::WriteBlockRow:
          if (res.granted) bk.register_required_reads(r.word, 1);
          break;
        case Purpose::OutputRead: {
          const std::int64_t q = (cycle - (sch_.latency() - 1)) / 2;
          const int wpl = plan_.width() / kWordPixels;
          OutEntry e{q, static_cast<int>(q % wpl) * kWordPixels, static_cast<int>(q / wpl), {}};
          if (res.granted) e.data = res.data.pixels;
          out_reg_.push_back(e);
          break;
        }
        case Purpose::PredictFetch:
          if (!res.granted) break;
          for (const auto& j : jobs_) {
            if (j.offset == offset && j.rec == r) {
              deliver(j, res.data);
              break;
            }
          }
          break;
      }
    }
  }

  for (const auto& c : cfg_.faults.corrupt_words) {
    if (c.cycle != cycle) continue;
    for (auto& px : bank(c.buffer, c.bank).mutable_word(c.word).pixels) px.c0 ^= 1;
  }
}

void Engine::emit(std::int64_t cycle) {
  const std::int64_t g = cycle - sch_.latency();
  if (g < 0 || cycle >= sch_.total_cycles()) return;
  const std::int64_t q = g / 2;
  const int half = static_cast<int>(g % 2);
  while (!out_reg_.empty() && out_reg_.front().q < q) out_reg_.pop_front();
  DisplayPixels ev;
  ev.cycle = cycle;
  const int wpl = plan_.width() / kWordPixels;
  ev.x = static_cast<int>(q % wpl) * kWordPixels + half * 4;
  ev.y = static_cast<int>(q / wpl);
  if (!out_reg_.empty() && out_reg_.front().q == q) {
    const OutEntry& e = out_reg_.front();
    ev.x = e.x + half * 4;
    ev.y = e.y;
    if (e.data) {
      for (int i = 0; i < 4; ++i) ev.pixels[static_cast<std::size_t>(i)] = (*e.data)[half * 4 + i];
    }
  }
  const std::int64_t before = checker_.state().mismatches;
  checker_.consume(ev);
  if (checker_.state().mismatches != before) {
    note("cycle " + std::to_string(cycle) + ": output mismatch at (" + std::to_string(ev.x) +
         "," + std::to_string(ev.y) + ")");
  }
  if (half == 1 && !out_reg_.empty() && out_reg_.front().q == q) out_reg_.pop_front();
}

void Engine::serve(std::int64_t h) {
  const BlockCoord b = plan_.block_at(h);
  const auto s = static_cast<std::size_t>(b.slice_col);
  ReconBuffer& rb = recon_[s];
  const DecodedBlock& fwd = fwd_[s];
  const bool fwd_left =
      fwd.valid && fwd.b.blockline == b.blockline && fwd.b.block_x == b.block_x - 1;
  window_pixels(spec(), b, plan_, win_);
  served_.clear();
  for (const auto& p : win_) {
    std::optional<PixelValue> v;
    if (policy().is_forwarded(p.range, p.rel)) {
      if (fwd_left) {
        v = fwd.ycc[static_cast<std::size_t>(p.y - fwd.y0)][static_cast<std::size_t>(p.x - fwd.x0)];
        ++served_forwarded_;
      }
    } else if (const PixelValue* r = rb.find(p.range, p.x, p.y)) {
      v = *r;
      ++served_resident_;
    } else if (arch_.direct_fetch) {
      auto it = staged_.find(word_key(p.y, word_start(p.x)));
      if (it != staged_.end()) {
        const PixelValue& px = it->second[static_cast<std::size_t>(p.x % kWordPixels)];
        if (p.space == ColorSpace::RGB) {
          v = px;
        } else if (arch_.reconvert_on_fetch()) {
          v = ycocg_from_rgb(px);
        }
        if (v) ++served_fetched_;
      }
    }
    served_.push_back(ServedPixel{p, v});
  }
  const PredictionCheck pc = verify_prediction(served_, oracle_);
  log_.counts.availability_misses += pc.misses;
  log_.counts.prediction_mismatches += pc.mismatches;
  if (!pc.ok()) {
    for (const auto& sp : served_) {
      if (sp.value && *sp.value == oracle_.golden(sp.where.x, sp.where.y, sp.where.space)) continue;
      note("block " + std::to_string(h) + ": " + (sp.value ? "wrong" : "missing") + " " +
           to_string(sp.where.range) + " pixel (" + std::to_string(sp.where.x) + "," +
           std::to_string(sp.where.y) + ")");
      break;
    }
  }

  const int next_bx = b.block_x + 1;
  rb.evict_if([&](WindowRange r, int x, int y) {
    const int bl = (y - line_offset_of(r)) / kBlockHeight;
    if (bl > b.blockline) return false;
    if (bl < b.blockline) return true;
    return !needed_from(b, next_bx, r, x, y);
  });
  for (const auto& sp : served_) {
    const WindowPixel& p = sp.where;
    if (sp.value && !rb.contains(p.range, p.x, p.y) &&
        needed_by(b, next_bx, next_bx, p.range, p.x, p.y)) {
      rb.insert(p.range, p.x, p.y, *sp.value);
    }
  }
  if (fwd_left) {
    for (int row = 0; row < kBlockHeight; ++row) {
      const WindowRange r = row == 0 ? WindowRange::CurRow0 : WindowRange::CurRow1;
      for (int i = 0; i < kBlockWidth; ++i) {
        const int x = fwd.x0 + i;
        const int y = fwd.y0 + row;
        if (!rb.contains(r, x, y) && needed_by(b, next_bx, next_bx, r, x, y)) {
          rb.insert(r, x, y, fwd.ycc[static_cast<std::size_t>(row)][static_cast<std::size_t>(i)]);
        }
      }
    }
  }
  staged_.clear();
}

SimOutcome Engine::run() {
  const std::int64_t slots = sch_.total_slots();
  if (plan_.total_blocks() > 0) serve(0);
  for (std::int64_t k = 0; k < slots; ++k) {
    const BlockSlotPlan sp = sch_.plan_slot(k);
    if (sp.block) decode(k, *sp.block);
    plan_fetches(k, sp);
    for (int off = 0; off < kCyclesPerSlot; ++off) {
      const std::int64_t c = k * kCyclesPerSlot + off;
      if (c >= sch_.total_cycles()) break;
      run_cycle(c, off, sp);
      emit(c);
    }
    if (k + 1 < plan_.total_blocks()) serve(k + 1);
  }
  const OutputCheck oc = checker_.finish();
  log_.counts.output_mismatches = oc.mismatches;
  log_.counts.order_violations = oc.order_violations;
  log_.counts.rate_violations = oc.rate_violations;

  SimOutcome out;
  SimReport& r = out.report;
  r.preset = to_string(arch_.name);
  const BufferAccounting acc = buffer_accounting(arch_, plan_);
  r.line_buffer_bits_total = acc.line_buffer_bits_total;
  r.recon_pixels_per_slice = acc.recon_pixels_per_slice;
  r.recon_bits_per_slice = acc.recon_bits_per_slice;
  r.recon_bits_total = acc.recon_bits_total;
  r.recon_bytes_per_slice = acc.recon_bytes_per_slice;
  r.recon_bytes_total = acc.recon_bytes_total;
  r.ycocg_extra_bits_per_slice = acc.ycocg_extra_bits_per_slice;
  r.reductions_vs_baseline = acc.reductions_vs_baseline;
  const ThroughputMetrics tm = throughput_metrics(cfg_.clock_mhz, cfg_.throughput_ppc, cfg_.image);
  r.mpixels_per_sec = tm.mpixels_per_sec;
  r.fps = tm.fps;
  r.latency_cycles = sch_.latency();
  r.total_cycles = sch_.total_cycles();
  r.violations = log_.counts;
  r.violation_details = log_.details;
  for (const auto& rb : recon_) {
    r.max_recon_occupancy = std::max(r.max_recon_occupancy, rb.max_occupancy());
    r.recon_overflows += rb.overflows();
  }
  r.blocks = plan_.total_blocks();
  r.pixels_emitted = oc.pixels;
  r.served_resident = served_resident_;
  r.served_forwarded = served_forwarded_;
  r.served_fetched = served_fetched_;
  r.predict_fetches = predict_fetches_;
  r.pass = log_.counts.total() == 0;
  out.trace = std::move(trace_);
  return out;
}

}  // namespace

void SimConfig::validate() const {
  (void)build_geometry(image, slices);
  arch.validate();
  if (!(clock_mhz > 0.0)) throw ConfigError("clock_mhz must be positive");
  if (throughput_ppc != kCyclesPerSlot) {
    throw ConfigError("throughput_ppc must be 4 (one 8x2 block per 4-cycle slot)");
  }
  if (sram_read_latency != 0 && sram_read_latency != 1) {
    throw ConfigError("sram_read_latency must be 0 or 1");
  }
}

ArchPreset effective_arch(const SimConfig& cfg) {
  ArchPreset a = cfg.arch;
  const FaultSpec& f = cfg.faults;
  if (f.recon_capacity) a.recon_capacity = *f.recon_capacity;
  if (f.line_buffers) a.line_buffers = *f.line_buffers;
  if (f.line_delay) a.line_delay = *f.line_delay;
  if (f.forwarding) a.residency.forwarding_enabled = *f.forwarding;
  a.validate();
  return a;
}

SimConfig inject_fault(const SimConfig& cfg, const FaultSpec& fault) {
  SimConfig out = cfg;
  FaultSpec& f = out.faults;
  if (fault.recon_capacity) {
    if (*fault.recon_capacity < 0) throw ConfigError("recon_capacity fault must be >= 0");
    f.recon_capacity = fault.recon_capacity;
  }
  if (fault.line_buffers) {
    if (*fault.line_buffers != 2 && *fault.line_buffers != 3) {
      throw ConfigError("line_buffers fault must be 2 or 3");
    }
    f.line_buffers = fault.line_buffers;
  }
  if (fault.line_delay) f.line_delay = fault.line_delay;
  if (fault.banks_per_buffer) {
    if (*fault.banks_per_buffer != 1 && *fault.banks_per_buffer != 2) {
      throw ConfigError("banks_per_buffer fault must be 1 or 2");
    }
    f.banks_per_buffer = fault.banks_per_buffer;
  }
  if (fault.forwarding) f.forwarding = fault.forwarding;
  f.extra_fetch = f.extra_fetch || fault.extra_fetch;
  f.corrupt_words.insert(f.corrupt_words.end(), fault.corrupt_words.begin(),
                         fault.corrupt_words.end());
  (void)effective_arch(out);
  return out;
}

SimOutcome run_simulation(const SimConfig& cfg) {
  cfg.validate();
  Engine e(cfg);
  return e.run();
}

OutputChecker::OutputChecker(const GeometryPlan& plan, const GoldenOracle& oracle,
                             std::int64_t latency)
    : plan_(&plan), oracle_(&oracle), latency_(latency) {}

void OutputChecker::consume(const DisplayPixels& ev) {
  const int w = plan_->width();
  const std::int64_t p = next_group_ * 4;
  const int ex = static_cast<int>(p % w);
  const int ey = static_cast<int>(p / w);
  if (ev.cycle != latency_ + next_group_) ++check_.rate_violations;
  if (ev.x != ex || ev.y != ey) ++check_.order_violations;
  for (int i = 0; i < 4; ++i) {
    const auto& px = ev.pixels[static_cast<std::size_t>(i)];
    if (!px || *px != oracle_->golden_rgb(ex + i, ey)) ++check_.mismatches;
  }
  check_.pixels += 4;
  ++next_group_;
}

OutputCheck OutputChecker::finish() {
  const std::int64_t groups = static_cast<std::int64_t>(plan_->width()) * plan_->height() / 4;
  if (next_group_ < groups) check_.rate_violations += groups - next_group_;
  next_group_ = std::max(next_group_, groups);
  return check_;
}

OutputCheck verify_output(const std::vector<DisplayPixels>& stream, const GeometryPlan& plan,
                          const GoldenOracle& oracle, std::int64_t latency) {
  OutputChecker c(plan, oracle, latency);
  for (const auto& ev : stream) c.consume(ev);
  return c.finish();
}

PredictionCheck verify_prediction(const std::vector<ServedPixel>& served,
                                  const GoldenOracle& oracle) {
  PredictionCheck out;
  for (const auto& s : served) {
    if (!s.value) {
      ++out.misses;
    } else if (*s.value != oracle.golden(s.where.x, s.where.y, s.where.space)) {
      ++out.mismatches;
    }
  }
  return out;
}

}  // namespace dbesim
