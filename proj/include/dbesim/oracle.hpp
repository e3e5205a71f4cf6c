#pragma once

#include <cstdint>

namespace dbesim {

enum class ColorSpace : std::uint8_t { RGB, YCoCg };

struct PixelValue {
  std::int32_t c0 = 0;
  std::int32_t c1 = 0;
  std::int32_t c2 = 0;
  ColorSpace space = ColorSpace::RGB;

  bool operator==(const PixelValue&) const = default;
};

/// 64-bit mixer behind the golden frame (splitmix64 finalizer over a seeded
/// coordinate hash). Exposed for regression tests.
std::uint64_t golden_mix(std::uint64_t seed, std::uint64_t x, std::uint64_t y, std::uint64_t c);

/// Deterministic stand-in for the decoder core: every (x, y) has a fixed RGB value.
class GoldenOracle {
 public:
  explicit GoldenOracle(std::uint64_t seed = 0, int bit_depth = 10);

  PixelValue golden_rgb(int x, int y) const;
  PixelValue golden_ycocg(int x, int y) const;
  PixelValue golden(int x, int y, ColorSpace space) const;

  std::uint64_t seed() const { return seed_; }
  int bit_depth() const { return bit_depth_; }

 private:
  std::uint64_t seed_;
  int bit_depth_;
  std::uint64_t mask_;
};

/// Lossless YCoCg-R forward transform.
PixelValue ycocg_from_rgb(const PixelValue& rgb);

/// Exact inverse; throws RangeError if the result leaves the RGB cube for `bit_depth`.
PixelValue rgb_from_ycocg(const PixelValue& ycocg, int bit_depth = 10);

}  // namespace dbesim
