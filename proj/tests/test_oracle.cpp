#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "dbesim/errors.hpp"
#include "dbesim/oracle.hpp"

using namespace dbesim;

// Reference values computed by an independent script implementing the same mixer.
TEST_CASE("golden_mix regression constants") {
  CHECK(golden_mix(0, 0, 0, 0) == 0ULL);
  CHECK(golden_mix(0, 0, 0, 1) == 0xb39362cb946013e3ULL);
  CHECK(golden_mix(0, 0, 0, 2) == 0xfbf70f510e50a076ULL);
}

TEST_CASE("golden_rgb values at 10 bits") {
  const GoldenOracle o(0, 10);
  CHECK(o.golden_rgb(0, 0) == PixelValue{0, 995, 118, ColorSpace::RGB});
  CHECK(o.golden_rgb(5, 7) == PixelValue{381, 631, 199, ColorSpace::RGB});
  const GoldenOracle o2(12345, 10);
  CHECK(o2.golden_rgb(100, 3) == PixelValue{848, 560, 878, ColorSpace::RGB});
}

TEST_CASE("golden frame is deterministic, in range and seed dependent") {
  const GoldenOracle a(3, 12), b(3, 12), c(4, 12);
  int differ = 0;
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      const PixelValue p = a.golden_rgb(x, y);
      CHECK(p == b.golden_rgb(x, y));
      for (int v : {p.c0, p.c1, p.c2}) {
        CHECK(v >= 0);
        CHECK(v < 4096);
      }
      differ += p != c.golden_rgb(x, y);
    }
  }
  CHECK(differ > 200);
}

TEST_CASE("no two horizontally adjacent pixels are identical in a 64x64 probe") {
  const GoldenOracle o(0, 10);
  for (int y = 0; y < 64; ++y) {
    for (int x = 1; x < 64; ++x) CHECK(o.golden_rgb(x, y) != o.golden_rgb(x - 1, y));
  }
}

TEST_CASE("ycocg forward transform examples") {
  const PixelValue t = ycocg_from_rgb(PixelValue{1023, 0, 0, ColorSpace::RGB});
  CHECK(t == PixelValue{255, 1023, -511, ColorSpace::YCoCg});
  CHECK(ycocg_from_rgb(PixelValue{0, 0, 0, ColorSpace::RGB}) ==
        PixelValue{0, 0, 0, ColorSpace::YCoCg});
}

TEST_CASE("ycocg round trip is exact over every 8-bit RGB triple") {
  bool ok = true;
  for (int r = 0; r < 256 && ok; ++r) {
    for (int g = 0; g < 256; ++g) {
      for (int b = 0; b < 256; ++b) {
        const PixelValue rgb{r, g, b, ColorSpace::RGB};
        if (rgb_from_ycocg(ycocg_from_rgb(rgb), 8) != rgb) {
          ok = false;
          break;
        }
      }
    }
  }
  CHECK(ok);
}

TEST_CASE("ycocg round trip on random 12-bit samples") {
  const GoldenOracle o(99, 12);
  for (int i = 0; i < 5000; ++i) {
    const PixelValue rgb = o.golden_rgb(i, i / 7);
    CHECK(rgb_from_ycocg(ycocg_from_rgb(rgb), 12) == rgb);
    CHECK(o.golden_ycocg(i, i / 7) == ycocg_from_rgb(rgb));
  }
}

TEST_CASE("inverse outside the RGB cube throws RangeError") {
  CHECK_THROWS_AS(rgb_from_ycocg(PixelValue{0, -15, -15, ColorSpace::YCoCg}, 4), RangeError);
  CHECK_THROWS_AS(rgb_from_ycocg(PixelValue{2000, 0, 0, ColorSpace::YCoCg}, 10), RangeError);
}

TEST_CASE("golden() dispatches on color space") {
  const GoldenOracle o(1, 10);
  CHECK(o.golden(3, 4, ColorSpace::RGB) == o.golden_rgb(3, 4));
  CHECK(o.golden(3, 4, ColorSpace::YCoCg) == o.golden_ycocg(3, 4));
}
