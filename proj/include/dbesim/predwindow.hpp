#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dbesim/geometry.hpp"
#include "dbesim/membank.hpp"
#include "dbesim/oracle.hpp"

namespace dbesim {

/// Prediction window sections. The previous line carries ranges A and B
/// (RGB); the two current rows carry range C (YCoCg).
enum class WindowRange : std::uint8_t { PrevLine = 0, CurRow0 = 1, CurRow1 = 2 };
inline constexpr std::array<WindowRange, 3> kAllRanges = {
    WindowRange::PrevLine, WindowRange::CurRow0, WindowRange::CurRow1};

/// Inclusive span of offsets relative to the block's left edge.
struct Span {
  int lo = 0;
  int hi = -1;
  int size() const { return hi < lo ? 0 : hi - lo + 1; }
  bool contains(int rel) const { return rel >= lo && rel <= hi; }
  bool operator==(const Span&) const = default;
};

struct WindowSpec {
  Span prev_line{-9, 31};
  Span cur_row0{-33, -1};
  Span cur_row1{-32, -1};

  const Span& span(WindowRange r) const;
  Span& span(WindowRange r);
  int total() const { return prev_line.size() + cur_row0.size() + cur_row1.size(); }
  /// Throws ConfigError unless current-row spans lie strictly left of the block.
  void validate() const;

  bool operator==(const WindowSpec&) const = default;
};

ColorSpace color_space_of(WindowRange r);
/// Line offset of the section relative to the block's upper row.
int line_offset_of(WindowRange r);
std::string to_string(WindowRange r);

struct WindowPixel {
  int x = 0;
  int y = 0;
  WindowRange range = WindowRange::PrevLine;
  int rel = 0;
  ColorSpace space = ColorSpace::RGB;
};

/// Window of block b, clipped to its slice; the previous line is absent on the
/// first blockline of a slice row.
std::vector<WindowPixel> window_pixels(const WindowSpec& spec, const BlockCoord& b,
                                       const GeometryPlan& plan);
void window_pixels(const WindowSpec& spec, const BlockCoord& b, const GeometryPlan& plan,
                   std::vector<WindowPixel>& out);

/// The 16 pixels of the block immediately left of b (empty for the first block).
std::vector<WindowPixel> forwarded_set(const BlockCoord& b, const GeometryPlan& plan);

/// Which window positions live in the reconstruction buffer. Positions that are
/// neither resident nor forwarded must be fetched from the line buffer.
struct ResidencyPolicy {
  struct Run {
    WindowRange range;
    int lo;
    int hi;
  };

  std::array<int, 3> base{};                  // span.lo per range
  std::array<std::vector<bool>, 3> resident;  // indexed by rel - base
  bool forwarding_enabled = false;
  bool reconvert_on_fetch = false;

  static ResidencyPolicy none(const WindowSpec& spec, bool forwarding, bool reconvert);
  /// Everything not forwarded is resident.
  static ResidencyPolicy full(const WindowSpec& spec, bool forwarding, bool reconvert);
  static ResidencyPolicy from_runs(const WindowSpec& spec, const std::vector<Run>& runs,
                                   bool forwarding, bool reconvert);

  static bool forwarded_position(WindowRange r, int rel) {
    return r != WindowRange::PrevLine && rel >= -kBlockWidth && rel <= -1;
  }
  bool is_forwarded(WindowRange r, int rel) const {
    return forwarding_enabled && forwarded_position(r, rel);
  }
  bool is_resident(WindowRange r, int rel) const;
  void set_resident(WindowRange r, int rel, bool value);
  /// Resident positions over an unclipped window (the per-slice capacity need).
  int resident_count() const;
  /// Maximal contiguous resident runs, for printing and config round-trips.
  std::vector<Run> runs() const;
};

/// One slice column's reconstruction buffer: register-file storage split into
/// three circular sections that share a single pixel capacity.
class ReconBuffer {
 public:
  explicit ReconBuffer(int capacity = 0) : store_(capacity) {}

  static std::uint64_t tag(WindowRange r, int x, int y) {
    return (static_cast<std::uint64_t>(r) << 56) | (static_cast<std::uint64_t>(y) << 28) |
           static_cast<std::uint64_t>(x);
  }
  static WindowRange range_of(std::uint64_t t) { return static_cast<WindowRange>(t >> 56); }
  static int y_of(std::uint64_t t) { return static_cast<int>((t >> 28) & 0x0FFFFFFF); }
  static int x_of(std::uint64_t t) { return static_cast<int>(t & 0x0FFFFFFF); }

  /// False when the buffer is full (counted as an overflow).
  bool insert(WindowRange r, int x, int y, const PixelValue& v);
  const PixelValue* find(WindowRange r, int x, int y) const { return store_.find(tag(r, x, y)); }
  bool contains(WindowRange r, int x, int y) const { return store_.contains(tag(r, x, y)); }

  template <typename Pred>
  void evict_if(Pred pred) {
    store_.erase_if([&](std::uint64_t t) {
      if (!pred(range_of(t), x_of(t), y_of(t))) return false;
      --sections_[static_cast<std::size_t>(range_of(t))];
      return true;
    });
  }
  void clear();

  int capacity() const { return store_.capacity(); }
  int occupancy() const { return store_.occupancy(); }
  int max_occupancy() const { return store_.max_occupancy(); }
  int section_occupancy(WindowRange r) const { return sections_[static_cast<std::size_t>(r)]; }
  std::int64_t overflows() const { return overflows_; }

 private:
  DffFileModel store_;
  std::array<int, 3> sections_{};
  std::int64_t overflows_ = 0;
};

/// Throws MissError if the pixel is not resident.
PixelValue recon_read(const ReconBuffer& state, const WindowPixel& p);

}  // namespace dbesim
