#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dbesim {

inline constexpr int kBlockWidth = 8;
inline constexpr int kBlockHeight = 2;
inline constexpr int kWordPixels = 8;
inline constexpr int kWordBits = 256;
inline constexpr int kLineWords = 480;
inline constexpr int kCyclesPerSlot = 4;
inline constexpr int kMaxSliceColumns = 4;

enum class Chroma { C444, C422 };

struct ImageGeometry {
  int width = 0;
  int height = 0;
  Chroma chroma = Chroma::C444;
  int bit_depth = 10;
};

/// How slice columns share the single decode pipe within a blockline.
///   ColumnMajor: every block of column 0, then column 1, ...
///   RoundRobin:  one block slot per column in turn.
enum class Interleave { ColumnMajor, RoundRobin };

struct SliceLayout {
  int columns = 1;
  int rows = 1;
  Interleave interleave = Interleave::ColumnMajor;
};

struct BlockCoord {
  int slice_col = 0;
  int block_x = 0;    // 8-pixel units within the slice
  int blockline = 0;  // 2-row units, image-global
  std::int64_t global_block_index = 0;

  bool operator==(const BlockCoord&) const = default;
};

/// Half-open pixel rectangle.
struct PixelRect {
  int x0 = 0, x1 = 0;
  int y0 = 0, y1 = 0;
  bool operator==(const PixelRect&) const = default;
};

enum class LineRole { Upper, Lower };

struct WordAddress {
  int buffer_id = 0;
  int bank_id = 0;
  int word_index = 0;      // line-buffer word (partition base already applied)
  int partition_base = 0;
  int pixel_offset = 0;    // position of the pixel inside the word
  bool operator==(const WordAddress&) const = default;
};

/// Immutable image/slice/block layout. All queries are O(1).
class GeometryPlan {
 public:
  GeometryPlan() = default;
  GeometryPlan(const ImageGeometry& image, const SliceLayout& slices);

  const ImageGeometry& image() const { return image_; }
  const SliceLayout& slices() const { return slices_; }

  int width() const { return image_.width; }
  int height() const { return image_.height; }
  int columns() const { return slices_.columns; }
  int slice_width() const { return slice_width_; }
  int slice_height() const { return slice_height_; }
  int blocks_per_slice_line() const { return slice_width_ / kBlockWidth; }
  int blocks_per_blockline() const { return width() / kBlockWidth; }
  int blocklines() const { return height() / kBlockHeight; }
  int cycles_per_slot() const { return kCyclesPerSlot; }
  std::int64_t total_blocks() const {
    return static_cast<std::int64_t>(blocks_per_blockline()) * blocklines();
  }

  int partition_words() const { return kLineWords / columns(); }
  int partition_base(int slice_col) const { return slice_col * partition_words(); }
  const std::vector<int>& partition_bases() const { return partition_bases_; }

  int slice_base(int slice_col) const { return slice_col * slice_width_; }
  int slice_of_x(int x) const { return x / slice_width_; }

  /// True when the blockline is the first of a slice row (no previous line available).
  bool is_slice_row_start(int blockline) const {
    return (blockline * kBlockHeight) % slice_height_ == 0;
  }

  /// Block decoded in global slot `index`.
  BlockCoord block_at(std::int64_t index) const;
  /// Inverse of block_at.
  std::int64_t slot_of(int slice_col, int block_x, int blockline) const;
  /// Block covering pixel (x, y).
  BlockCoord block_of_pixel(int x, int y) const;

 private:
  ImageGeometry image_;
  SliceLayout slices_;
  int slice_width_ = 0;
  int slice_height_ = 0;
  std::vector<int> partition_bases_;
};

GeometryPlan build_geometry(const ImageGeometry& image, const SliceLayout& slices);

PixelRect block_to_pixels(const BlockCoord& b, const GeometryPlan& plan);

/// Word address of pixel x in an unsplit line buffer (buffer 0 = upper, 1 = lower).
/// Bank assignment for split buffers is the scheduler's job.
WordAddress pixel_to_word(int x, LineRole role, const GeometryPlan& plan, int slice_col);

/// First pixel x covered by a word of a slice column's partition.
int word_to_pixel(int word_index, const GeometryPlan& plan, int slice_col);

std::vector<BlockCoord> decode_order(const GeometryPlan& plan);

std::string to_string(Chroma c);
std::string to_string(Interleave i);

}  // namespace dbesim
