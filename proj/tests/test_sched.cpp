#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <stdexcept>

#include "dbesim/errors.hpp"
#include "dbesim/sched.hpp"

using namespace dbesim;

namespace {

GeometryPlan make(int w, int h, int cols = 1) {
  return build_geometry(ImageGeometry{w, h, Chroma::C444, 10}, SliceLayout{cols, 1, {}});
}

}  // namespace

TEST_CASE("preset fields") {
  const auto b = ArchPreset::baseline();
  const auto t1 = ArchPreset::type1();
  const auto t2 = ArchPreset::type2();
  CHECK(b.line_buffers == 3);
  CHECK(t1.line_buffers == 2);
  CHECK(t2.banks_per_buffer == 2);
  CHECK(b.recon_capacity == 106);
  CHECK(t1.recon_capacity == 90);
  CHECK(t2.recon_capacity == 25);
  CHECK(t1.forwarding());
  CHECK_FALSE(b.forwarding());
  CHECK(t2.reconvert_on_fetch());
  CHECK(preset_from_string("type2") == PresetName::Type2);
  CHECK_THROWS_AS(preset_from_string("Type3"), ConfigError);
  ArchPreset bad = t2;
  bad.banks_per_buffer = 1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = b;
  bad.fetch_offsets = {4};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("latency: one blockline vs half a blockline of decode cycles") {
  const GeometryPlan uhd = make(3840, 2160, 4);
  CHECK(Scheduler(uhd, ArchPreset::baseline()).latency() == 1920);
  CHECK(Scheduler(uhd, ArchPreset::type1()).latency() == 960);
  CHECK(Scheduler(uhd, ArchPreset::type2()).latency() == 960);
  const GeometryPlan small = make(256, 64);
  const Scheduler s(small, ArchPreset::baseline());
  CHECK(s.total_cycles() == 256 * 64 / 4 + s.latency());
}

TEST_CASE("line to buffer mapping") {
  const GeometryPlan p = make(64, 16);
  const Scheduler b(p, ArchPreset::baseline());
  CHECK(b.buffer_for_line(0) == 0);
  CHECK(b.buffer_for_line(1) == 1);
  CHECK(b.buffer_for_line(3) == 2);
  CHECK(b.buffer_for_line(5) == 1);
  const Scheduler t(p, ArchPreset::type1());
  CHECK(t.buffer_for_line(3) == 1);
  const Scheduler t2(p, ArchPreset::type2());
  const WordAddress a = t2.address(3, 24);
  CHECK(a.buffer_id == 1);
  CHECK(a.bank_id == 1);
  CHECK(t2.bank_local_index(a.word_index) == 1);
}

TEST_CASE("word validity window") {
  const GeometryPlan p = make(64, 8);
  const Scheduler t(p, ArchPreset::type1());
  // Line 1 is written by block 0 (slot 0) and overwritten by line 3 (slot 8).
  CHECK(t.write_slot(1, 0) == 0);
  CHECK(t.overwrite_slot(1, 0) == 8);
  CHECK_FALSE(t.word_valid(1, 0, 0));
  CHECK(t.word_valid(1, 0, 1));
  CHECK(t.word_valid(1, 0, 7));
  CHECK_FALSE(t.word_valid(1, 0, 8));
}

TEST_CASE("Type1 slot pattern is write, output, fetch, output") {
  const GeometryPlan p = make(640, 8);
  const Scheduler s(p, ArchPreset::type1());
  const BlockCoord b = p.block_at(100);
  const BlockSlotPlan sp = plan_type1(b, s, HalfPhase::FirstHalf);
  REQUIRE(sp.reserved.size() == 2);
  for (const auto& r : sp.reserved) {
    CHECK(r[0] == Purpose::WriteBlockRow);
    CHECK(r[1] == Purpose::OutputRead);
    CHECK(r[2] == Purpose::PredictFetch);
    CHECK(r[3] == Purpose::OutputRead);
  }
  CHECK(sp.cycles[0].size() == 2);
  CHECK(sp.cycles[1].size() == 1);
  CHECK(sp.cycles[3].size() == 1);
  CHECK(sp.fetch_budget == 1);
  CHECK(sp.fetch_cells.size() == 2);
  CHECK_THROWS_AS(plan_type1(b, s, HalfPhase::SecondHalf), std::invalid_argument);
}

TEST_CASE("Type2 banks see at most four accesses per slot and fetch every cycle") {
  const GeometryPlan p = make(640, 16, 2);
  const Scheduler s(p, ArchPreset::type2());
  for (std::int64_t slot = 0; slot < s.total_slots(); ++slot) {
    const BlockSlotPlan sp = s.plan_slot(slot);
    std::map<std::pair<int, int>, int> fixed;
    for (const auto& cyc : sp.cycles) {
      for (const auto& r : cyc) ++fixed[{r.buffer, r.bank}];
    }
    std::map<std::pair<int, int>, int> cells;
    for (const auto& c : sp.fetch_cells) ++cells[{c.buffer, c.bank}];
    for (int buf = 0; buf < 2; ++buf) {
      for (int bank = 0; bank < 2; ++bank) {
        CHECK(fixed[{buf, bank}] + cells[{buf, bank}] == kCyclesPerSlot);
      }
    }
    std::array<bool, kCyclesPerSlot> any_cell{};
    for (const auto& c : sp.fetch_cells) any_cell[static_cast<std::size_t>(c.offset)] = true;
    for (bool on : any_cell) CHECK(on);
  }
}

TEST_CASE("fixed accesses never collide on a bank") {
  const GeometryPlan p = make(640, 16, 4);
  for (const auto& preset : {ArchPreset::baseline(), ArchPreset::type1(), ArchPreset::type2()}) {
    const Scheduler s(p, preset);
    for (std::int64_t slot = 0; slot < s.total_slots(); ++slot) {
      const BlockSlotPlan sp = s.plan_slot(slot);
      for (const auto& cyc : sp.cycles) {
        std::map<std::pair<int, int>, int> use;
        for (const auto& r : cyc) CHECK(++use[{r.buffer, r.bank}] == 1);
      }
    }
  }
}

TEST_CASE("output reads walk raster order every other cycle") {
  const GeometryPlan p = make(64, 4);
  const Scheduler s(p, ArchPreset::type1());
  const std::int64_t d = s.latency();
  CHECK_FALSE(s.output_read_at(d - 2).has_value());
  const auto first = s.output_read_at(d - 1);
  REQUIRE(first.has_value());
  CHECK(first->word_seq == 0);
  CHECK_FALSE(s.output_read_at(d).has_value());
  const auto next = s.output_read_at(d + 1);
  REQUIRE(next.has_value());
  CHECK(next->x == 8);
  const auto wrap = s.output_read_at(d - 1 + 2 * 8);
  REQUIRE(wrap.has_value());
  CHECK(wrap->x == 0);
  CHECK(wrap->y == 1);
  const auto events = output_timeline(s);
  REQUIRE(events.size() == 64 * 4 / 4);
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(events[i].cycle == d + static_cast<std::int64_t>(i));
  }
}

TEST_CASE("read latency removes the last fetch offset") {
  const GeometryPlan p = make(64, 4);
  const Scheduler s(p, ArchPreset::type2(), 1);
  for (const auto& c : s.plan_slot(3).fetch_cells) CHECK(c.offset < 3);
  CHECK_THROWS_AS(Scheduler(p, ArchPreset::type2(), 2), ConfigError);
}
