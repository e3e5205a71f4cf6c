#include "dbesim/geometry.hpp"

#include <string>

#include "dbesim/errors.hpp"

namespace dbesim {

GeometryPlan::GeometryPlan(const ImageGeometry& image, const SliceLayout& slices)
    : image_(image), slices_(slices) {
  if (image.width <= 0 || image.height <= 0) {
    throw ConfigError("image dimensions must be positive");
  }
  if (image.bit_depth < 8 || image.bit_depth > 12) {
    throw ConfigError("bit_depth must be in [8, 12], got " + std::to_string(image.bit_depth));
  }
  if (slices.columns != 1 && slices.columns != 2 && slices.columns != 4) {
    throw ConfigError("slice columns must be 1, 2 or 4, got " + std::to_string(slices.columns));
  }
  if (slices.rows < 1) throw ConfigError("slice rows must be >= 1");
  if (image.width % (kBlockWidth * slices.columns) != 0) {
    throw ConfigError("width " + std::to_string(image.width) + " not divisible by 8 x " +
                      std::to_string(slices.columns) + " slice columns");
  }
  if (image.height % kBlockHeight != 0) {
    throw ConfigError("height " + std::to_string(image.height) + " is odd");
  }
  if (image.height % slices.rows != 0 || (image.height / slices.rows) % kBlockHeight != 0) {
    throw ConfigError("slice rows must split the height into even-height slices");
  }
  slice_width_ = image.width / slices.columns;
  slice_height_ = image.height / slices.rows;
  if (slice_width_ / kWordPixels > kLineWords / slices.columns) {
    throw ConfigError("slice width " + std::to_string(slice_width_) + " exceeds the " +
                      std::to_string(kLineWords / slices.columns) + "-word line partition");
  }
  for (int s = 0; s < slices.columns; ++s) partition_bases_.push_back(partition_base(s));
}

BlockCoord GeometryPlan::block_at(std::int64_t index) const {
  if (index < 0 || index >= total_blocks()) {
    throw RangeError("block index " + std::to_string(index) + " out of range");
  }
  const int bpl = blocks_per_blockline();
  const int n = blocks_per_slice_line();
  BlockCoord b;
  b.global_block_index = index;
  b.blockline = static_cast<int>(index / bpl);
  const int r = static_cast<int>(index % bpl);
  if (slices_.interleave == Interleave::ColumnMajor) {
    b.slice_col = r / n;
    b.block_x = r % n;
  } else {
    b.slice_col = r % columns();
    b.block_x = r / columns();
  }
  return b;
}

std::int64_t GeometryPlan::slot_of(int slice_col, int block_x, int blockline) const {
  if (slice_col < 0 || slice_col >= columns() || block_x < 0 ||
      block_x >= blocks_per_slice_line() || blockline < 0 || blockline >= blocklines()) {
    throw RangeError("block coordinate out of range");
  }
  const std::int64_t line_base = static_cast<std::int64_t>(blockline) * blocks_per_blockline();
  if (slices_.interleave == Interleave::ColumnMajor) {
    return line_base + static_cast<std::int64_t>(slice_col) * blocks_per_slice_line() + block_x;
  }
  return line_base + static_cast<std::int64_t>(block_x) * columns() + slice_col;
}

BlockCoord GeometryPlan::block_of_pixel(int x, int y) const {
  if (x < 0 || x >= width() || y < 0 || y >= height()) {
    throw RangeError("pixel (" + std::to_string(x) + ", " + std::to_string(y) + ") outside image");
  }
  const int s = slice_of_x(x);
  const int bx = (x - slice_base(s)) / kBlockWidth;
  const int bl = y / kBlockHeight;
  return BlockCoord{s, bx, bl, slot_of(s, bx, bl)};
}

GeometryPlan build_geometry(const ImageGeometry& image, const SliceLayout& slices) {
  return GeometryPlan(image, slices);
}

PixelRect block_to_pixels(const BlockCoord& b, const GeometryPlan& plan) {
  if (b.slice_col < 0 || b.slice_col >= plan.columns() || b.block_x < 0 ||
      b.block_x >= plan.blocks_per_slice_line() || b.blockline < 0 ||
      b.blockline >= plan.blocklines()) {
    throw RangeError("block outside plan");
  }
  const int x0 = plan.slice_base(b.slice_col) + kBlockWidth * b.block_x;
  const int y0 = kBlockHeight * b.blockline;
  return PixelRect{x0, x0 + kBlockWidth, y0, y0 + kBlockHeight};
}

WordAddress pixel_to_word(int x, LineRole role, const GeometryPlan& plan, int slice_col) {
  if (slice_col < 0 || slice_col >= plan.columns()) throw RangeError("slice column out of range");
  const int base_x = plan.slice_base(slice_col);
  if (x < base_x || x >= base_x + plan.slice_width()) {
    throw RangeError("x=" + std::to_string(x) + " outside slice " + std::to_string(slice_col));
  }
  WordAddress a;
  a.buffer_id = role == LineRole::Upper ? 0 : 1;
  a.bank_id = 0;
  a.partition_base = plan.partition_base(slice_col);
  a.word_index = a.partition_base + (x - base_x) / kWordPixels;
  a.pixel_offset = (x - base_x) % kWordPixels;
  return a;
}

int word_to_pixel(int word_index, const GeometryPlan& plan, int slice_col) {
  const int local = word_index - plan.partition_base(slice_col);
  if (local < 0 || local >= plan.blocks_per_slice_line()) {
    throw RangeError("word " + std::to_string(word_index) + " outside slice partition");
  }
  return plan.slice_base(slice_col) + local * kWordPixels;
}

std::vector<BlockCoord> decode_order(const GeometryPlan& plan) {
  std::vector<BlockCoord> out;
  out.reserve(static_cast<std::size_t>(plan.total_blocks()));
  for (std::int64_t g = 0; g < plan.total_blocks(); ++g) out.push_back(plan.block_at(g));
  return out;
}

std::string to_string(Chroma c) { return c == Chroma::C444 ? "C444" : "C422"; }

std::string to_string(Interleave i) {
  return i == Interleave::ColumnMajor ? "column_major" : "round_robin";
}

}  // namespace dbesim
