#include "dbesim/predwindow.hpp"

#include <algorithm>
#include <string>

#include "dbesim/errors.hpp"

namespace dbesim {

const Span& WindowSpec::span(WindowRange r) const {
  switch (r) {
    case WindowRange::PrevLine: return prev_line;
    case WindowRange::CurRow0: return cur_row0;
    case WindowRange::CurRow1: return cur_row1;
  }
  return prev_line;
}

Span& WindowSpec::span(WindowRange r) {
  return const_cast<Span&>(static_cast<const WindowSpec&>(*this).span(r));
}

void WindowSpec::validate() const {
  for (WindowRange r : kAllRanges) {
    const Span& s = span(r);
    if (s.hi < s.lo) throw ConfigError("window span " + to_string(r) + " is empty");
  }
  if (cur_row0.hi > -1 || cur_row1.hi > -1) {
    throw ConfigError("current-row spans must end left of the block (hi <= -1)");
  }
  if (prev_line.size() > 256 || cur_row0.size() > 256 || cur_row1.size() > 256) {
    throw ConfigError("window span wider than 256 pixels");
  }
}

ColorSpace color_space_of(WindowRange r) {
  return r == WindowRange::PrevLine ? ColorSpace::RGB : ColorSpace::YCoCg;
}

int line_offset_of(WindowRange r) {
  switch (r) {
    case WindowRange::PrevLine: return -1;
    case WindowRange::CurRow0: return 0;
    case WindowRange::CurRow1: return 1;
  }
  return 0;
}

std::string to_string(WindowRange r) {
  switch (r) {
    case WindowRange::PrevLine: return "prev_line";
    case WindowRange::CurRow0: return "cur_row0";
    case WindowRange::CurRow1: return "cur_row1";
  }
  return "?";
}

void window_pixels(const WindowSpec& spec, const BlockCoord& b, const GeometryPlan& plan,
                   std::vector<WindowPixel>& out) {
  out.clear();
  const PixelRect rect = block_to_pixels(b, plan);
  const int lo_x = plan.slice_base(b.slice_col);
  const int hi_x = lo_x + plan.slice_width();
  const bool has_prev = !plan.is_slice_row_start(b.blockline);
  for (WindowRange r : kAllRanges) {
    if (r == WindowRange::PrevLine && !has_prev) continue;
    const Span& s = spec.span(r);
    const int y = rect.y0 + line_offset_of(r);
    const ColorSpace cs = color_space_of(r);
    const int first = std::max(s.lo, lo_x - rect.x0);
    const int last = std::min(s.hi, hi_x - 1 - rect.x0);
    for (int rel = first; rel <= last; ++rel) {
      out.push_back(WindowPixel{rect.x0 + rel, y, r, rel, cs});
    }
  }
}

std::vector<WindowPixel> window_pixels(const WindowSpec& spec, const BlockCoord& b,
                                       const GeometryPlan& plan) {
  std::vector<WindowPixel> out;
  window_pixels(spec, b, plan, out);
  return out;
}

std::vector<WindowPixel> forwarded_set(const BlockCoord& b, const GeometryPlan& plan) {
  std::vector<WindowPixel> out;
  if (b.block_x == 0) return out;
  const PixelRect rect = block_to_pixels(b, plan);
  for (WindowRange r : {WindowRange::CurRow0, WindowRange::CurRow1}) {
    for (int rel = -kBlockWidth; rel <= -1; ++rel) {
      out.push_back(WindowPixel{rect.x0 + rel, rect.y0 + line_offset_of(r), r, rel,
                                ColorSpace::YCoCg});
    }
  }
  return out;
}

ResidencyPolicy ResidencyPolicy::none(const WindowSpec& spec, bool forwarding, bool reconvert) {
  ResidencyPolicy p;
  for (WindowRange r : kAllRanges) {
    const auto i = static_cast<std::size_t>(r);
    p.base[i] = spec.span(r).lo;
    p.resident[i].assign(static_cast<std::size_t>(spec.span(r).size()), false);
  }
  p.forwarding_enabled = forwarding;
  p.reconvert_on_fetch = reconvert;
  return p;
}

ResidencyPolicy ResidencyPolicy::full(const WindowSpec& spec, bool forwarding, bool reconvert) {
  ResidencyPolicy p = none(spec, forwarding, reconvert);
  for (WindowRange r : kAllRanges) {
    const Span& s = spec.span(r);
    for (int rel = s.lo; rel <= s.hi; ++rel) {
      if (!p.is_forwarded(r, rel)) p.set_resident(r, rel, true);
    }
  }
  return p;
}

ResidencyPolicy ResidencyPolicy::from_runs(const WindowSpec& spec, const std::vector<Run>& runs,
                                           bool forwarding, bool reconvert) {
  ResidencyPolicy p = none(spec, forwarding, reconvert);
  for (const Run& run : runs) {
    const Span& s = spec.span(run.range);
    if (run.lo > run.hi || run.lo < s.lo || run.hi > s.hi) {
      throw ConfigError("resident run [" + std::to_string(run.lo) + ", " +
                        std::to_string(run.hi) + "] outside " + to_string(run.range) + " span");
    }
    for (int rel = run.lo; rel <= run.hi; ++rel) p.set_resident(run.range, rel, true);
  }
  return p;
}

bool ResidencyPolicy::is_resident(WindowRange r, int rel) const {
  const auto i = static_cast<std::size_t>(r);
  const int idx = rel - base[i];
  if (idx < 0 || idx >= static_cast<int>(resident[i].size())) return false;
  return resident[i][static_cast<std::size_t>(idx)];
}

void ResidencyPolicy::set_resident(WindowRange r, int rel, bool value) {
  const auto i = static_cast<std::size_t>(r);
  const int idx = rel - base[i];
  if (idx < 0 || idx >= static_cast<int>(resident[i].size())) {
    throw RangeError("relative offset " + std::to_string(rel) + " outside " + to_string(r));
  }
  resident[i][static_cast<std::size_t>(idx)] = value;
}

int ResidencyPolicy::resident_count() const {
  int n = 0;
  for (WindowRange r : kAllRanges) {
    const auto i = static_cast<std::size_t>(r);
    for (std::size_t k = 0; k < resident[i].size(); ++k) {
      const int rel = base[i] + static_cast<int>(k);
      if (resident[i][k] && !is_forwarded(r, rel)) ++n;
    }
  }
  return n;
}

std::vector<ResidencyPolicy::Run> ResidencyPolicy::runs() const {
  std::vector<Run> out;
  for (WindowRange r : kAllRanges) {
    const auto i = static_cast<std::size_t>(r);
    const int n = static_cast<int>(resident[i].size());
    for (int k = 0; k < n;) {
      if (!resident[i][static_cast<std::size_t>(k)]) {
        ++k;
        continue;
      }
      int e = k;
      while (e + 1 < n && resident[i][static_cast<std::size_t>(e + 1)]) ++e;
      out.push_back(Run{r, base[i] + k, base[i] + e});
      k = e + 1;
    }
  }
  return out;
}

bool ReconBuffer::insert(WindowRange r, int x, int y, const PixelValue& v) {
  const std::uint64_t t = tag(r, x, y);
  const bool fresh = !store_.contains(t);
  if (!store_.insert(t, v)) {
    ++overflows_;
    return false;
  }
  if (fresh) ++sections_[static_cast<std::size_t>(r)];
  return true;
}

void ReconBuffer::clear() {
  store_.clear();
  sections_ = {};
}

PixelValue recon_read(const ReconBuffer& state, const WindowPixel& p) {
  const PixelValue* v = state.find(p.range, p.x, p.y);
  if (v == nullptr) {
    throw MissError(to_string(p.range) + " pixel (" + std::to_string(p.x) + ", " +
                    std::to_string(p.y) + ") not resident");
  }
  return *v;
}

}  // namespace dbesim
