#include "dbesim/oracle.hpp"

#include <string>

#include "dbesim/errors.hpp"

namespace dbesim {

std::uint64_t golden_mix(std::uint64_t seed, std::uint64_t x, std::uint64_t y, std::uint64_t c) {
  std::uint64_t h = seed ^ (x * 0x9E3779B97F4A7C15ULL) ^ (y * 0xC2B2AE3D27D4EB4FULL) ^
                    (c * 0x165667B19E3779F9ULL);
  h ^= h >> 30;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 27;
  h *= 0x94D049BB133111EBULL;
  h ^= h >> 31;
  return h;
}

GoldenOracle::GoldenOracle(std::uint64_t seed, int bit_depth)
    : seed_(seed), bit_depth_(bit_depth), mask_((std::uint64_t{1} << bit_depth) - 1) {}

PixelValue GoldenOracle::golden_rgb(int x, int y) const {
  const auto ux = static_cast<std::uint64_t>(x);
  const auto uy = static_cast<std::uint64_t>(y);
  return PixelValue{static_cast<std::int32_t>(golden_mix(seed_, ux, uy, 0) & mask_),
                    static_cast<std::int32_t>(golden_mix(seed_, ux, uy, 1) & mask_),
                    static_cast<std::int32_t>(golden_mix(seed_, ux, uy, 2) & mask_),
                    ColorSpace::RGB};
}

PixelValue GoldenOracle::golden_ycocg(int x, int y) const {
  return ycocg_from_rgb(golden_rgb(x, y));
}

PixelValue GoldenOracle::golden(int x, int y, ColorSpace space) const {
  return space == ColorSpace::RGB ? golden_rgb(x, y) : golden_ycocg(x, y);
}

// >> on negative int32 is arithmetic (floor) in C++20.
PixelValue ycocg_from_rgb(const PixelValue& rgb) {
  const std::int32_t r = rgb.c0, g = rgb.c1, b = rgb.c2;
  const std::int32_t co = r - b;
  const std::int32_t t = b + (co >> 1);
  const std::int32_t cg = g - t;
  const std::int32_t y = t + (cg >> 1);
  return PixelValue{y, co, cg, ColorSpace::YCoCg};
}

PixelValue rgb_from_ycocg(const PixelValue& p, int bit_depth) {
  const std::int32_t y = p.c0, co = p.c1, cg = p.c2;
  const std::int32_t t = y - (cg >> 1);
  const std::int32_t g = cg + t;
  const std::int32_t b = t - (co >> 1);
  const std::int32_t r = b + co;
  const std::int32_t max = (1 << bit_depth) - 1;
  auto in_range = [max](std::int32_t v) { return v >= 0 && v <= max; };
  if (!in_range(r) || !in_range(g) || !in_range(b)) {
    throw RangeError("YCoCg (" + std::to_string(y) + ", " + std::to_string(co) + ", " +
                     std::to_string(cg) + ") maps outside the RGB cube");
  }
  return PixelValue{r, g, b, ColorSpace::RGB};
}

}  // namespace dbesim
