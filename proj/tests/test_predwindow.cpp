#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <tuple>

#include "dbesim/errors.hpp"
#include "dbesim/predwindow.hpp"

using namespace dbesim;

namespace {

GeometryPlan make(int w, int h, int cols) {
  return build_geometry(ImageGeometry{w, h, Chroma::C444, 10}, SliceLayout{cols, 1, {}});
}

}  // namespace

TEST_CASE("default window spec is 41 + 33 + 32 = 106 pixels") {
  const WindowSpec w;
  CHECK(w.prev_line.size() == 41);
  CHECK(w.cur_row0.size() == 33);
  CHECK(w.cur_row1.size() == 32);
  CHECK(w.total() == 106);
  CHECK_NOTHROW(w.validate());
}

TEST_CASE("invalid window specs") {
  WindowSpec w;
  w.cur_row0 = Span{-4, 0};
  CHECK_THROWS_AS(w.validate(), ConfigError);
  w = WindowSpec{};
  w.prev_line = Span{3, 2};
  CHECK_THROWS_AS(w.validate(), ConfigError);
}

TEST_CASE("interior block serves the full window") {
  const GeometryPlan p = make(640, 8, 1);
  const auto win = window_pixels(WindowSpec{}, p.block_at(2 * 80 + 40), p);
  CHECK(win.size() == 106);
  int rgb = 0;
  for (const auto& px : win) rgb += px.space == ColorSpace::RGB;
  CHECK(rgb == 41);
}

TEST_CASE("first blockline has no previous line: 65 pixels") {
  const GeometryPlan p = make(640, 8, 1);
  CHECK(window_pixels(WindowSpec{}, p.block_at(40), p).size() == 65);
}

TEST_CASE("window clipping matches a brute-force scan of the slice") {
  const GeometryPlan p = make(256, 6, 4);
  const WindowSpec spec;
  for (std::int64_t g = 0; g < p.total_blocks(); ++g) {
    const BlockCoord b = p.block_at(g);
    const PixelRect r = block_to_pixels(b, p);
    std::set<std::tuple<int, int, int>> expect;
    const int lo = p.slice_base(b.slice_col), hi = lo + p.slice_width();
    for (WindowRange range : kAllRanges) {
      if (range == WindowRange::PrevLine && b.blockline == 0) continue;
      for (int x = lo; x < hi; ++x) {
        if (spec.span(range).contains(x - r.x0)) {
          expect.insert({static_cast<int>(range), x, r.y0 + line_offset_of(range)});
        }
      }
    }
    std::set<std::tuple<int, int, int>> got;
    for (const auto& px : window_pixels(spec, b, p)) {
      got.insert({static_cast<int>(px.range), px.x, px.y});
      CHECK(px.rel == px.x - r.x0);
      CHECK(px.space == color_space_of(px.range));
    }
    CHECK(got == expect);
  }
}

TEST_CASE("leftmost block of a slice sees only the previous line ahead of it") {
  const GeometryPlan p = make(256, 6, 2);
  const auto win = window_pixels(WindowSpec{}, BlockCoord{1, 0, 1, p.slot_of(1, 0, 1)}, p);
  CHECK(win.size() == 32);
  for (const auto& px : win) {
    CHECK(px.range == WindowRange::PrevLine);
    CHECK(px.x >= 128);
  }
}

TEST_CASE("forwarded set is the left neighbour's 16 pixels") {
  const GeometryPlan p = make(64, 4, 1);
  CHECK(forwarded_set(p.block_at(0), p).empty());
  const auto f = forwarded_set(p.block_at(3), p);
  CHECK(f.size() == 16);
  for (const auto& px : f) {
    CHECK(px.x >= 16);
    CHECK(px.x < 24);
  }
}

TEST_CASE("residency policies") {
  const WindowSpec spec;
  CHECK(ResidencyPolicy::full(spec, false, false).resident_count() == 106);
  const auto t1 = ResidencyPolicy::full(spec, true, false);
  CHECK(t1.resident_count() == 90);
  CHECK(t1.is_forwarded(WindowRange::CurRow0, -1));
  CHECK_FALSE(t1.is_forwarded(WindowRange::PrevLine, -1));
  CHECK_FALSE(t1.is_resident(WindowRange::CurRow1, -8));
  CHECK(t1.is_resident(WindowRange::CurRow1, -9));
  const auto t2 =
      ResidencyPolicy::from_runs(spec, {{WindowRange::PrevLine, -9, 15}}, true, true);
  CHECK(t2.resident_count() == 25);
  REQUIRE(t2.runs().size() == 1);
  CHECK(t2.runs()[0].hi == 15);
  CHECK_THROWS_AS(ResidencyPolicy::from_runs(spec, {{WindowRange::CurRow0, -40, -1}}, true, true),
                  ConfigError);
}

TEST_CASE("reconstruction buffer capacity, sections and eviction") {
  ReconBuffer rb(3);
  const PixelValue v{1, 2, 3, ColorSpace::YCoCg};
  CHECK(rb.insert(WindowRange::CurRow0, 10, 0, v));
  CHECK(rb.insert(WindowRange::CurRow1, 10, 1, v));
  CHECK(rb.insert(WindowRange::PrevLine, 10, 1, v));
  CHECK_FALSE(rb.insert(WindowRange::PrevLine, 11, 1, v));
  CHECK(rb.overflows() == 1);
  CHECK(rb.section_occupancy(WindowRange::PrevLine) == 1);
  CHECK(recon_read(rb, WindowPixel{10, 0, WindowRange::CurRow0, 0, ColorSpace::YCoCg}) == v);
  CHECK_THROWS_AS(recon_read(rb, WindowPixel{11, 0, WindowRange::CurRow0, 0, ColorSpace::YCoCg}),
                  MissError);
  rb.evict_if([](WindowRange r, int, int) { return r != WindowRange::PrevLine; });
  CHECK(rb.occupancy() == 1);
  CHECK(rb.section_occupancy(WindowRange::CurRow0) == 0);
  CHECK(rb.max_occupancy() == 3);
}
