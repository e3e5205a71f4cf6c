#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <optional>
#include <random>

#include "dbesim/errors.hpp"
#include "dbesim/explore.hpp"

using namespace dbesim;

namespace {

std::optional<int> explore(const WindowSpec& spec, const ArchPreset& budget) {
  try {
    return minimal_resident_set(spec, budget).resident_pixels;
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

// `strong` has at least the capabilities of `weak`, so it never needs more residency.
bool no_worse(const std::optional<int>& strong, const std::optional<int>& weak) {
  if (!weak) return true;
  return strong && *strong <= *weak;
}

WindowSpec random_spec(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
  WindowSpec w;
  // Half the specs end the previous-line span on a word boundary, which a
  // one-word-per-slot budget needs to keep up.
  const int hi = rng() % 2 ? 8 * pick(1, 3) - 1 : pick(0, 20);
  w.prev_line = Span{pick(-12, 0), hi};
  w.cur_row0 = Span{pick(-24, -1), -1};
  w.cur_row1 = Span{pick(-24, -1), -1};
  return w;
}

ArchPreset budget(const WindowSpec& w, std::vector<int> offsets, int words, bool fwd, bool direct,
                  bool reconvert, int banks) {
  ArchPreset p = ArchPreset::baseline(w);
  p.name = PresetName::Custom;
  p.line_buffers = 2;
  p.line_delay = LineDelay::HalfLine;
  p.banks_per_buffer = banks;
  p.bank_rule = banks == 2 ? BankRule::ByBlockParity : BankRule::None;
  p.fetch_offsets = std::move(offsets);
  p.fetch_words_per_slot = words;
  p.direct_fetch = direct;
  p.residency = ResidencyPolicy::full(w, fwd, reconvert);
  return p;
}

}  // namespace

TEST_CASE("default presets: 106 / 90 / 25") {
  const WindowSpec spec;
  CHECK(minimal_resident_set(spec, ArchPreset::baseline()).resident_pixels == 106);
  CHECK(minimal_resident_set(spec, ArchPreset::type1()).resident_pixels == 90);
  const ExplorerResult t2 = minimal_resident_set(spec, ArchPreset::type2());
  CHECK(t2.resident_pixels == 25);
  CHECK(t2.policy.resident_count() == 25);
  CHECK(t2.policy.is_resident(WindowRange::PrevLine, -9));
  CHECK(t2.policy.is_resident(WindowRange::PrevLine, 15));
  CHECK_FALSE(t2.policy.is_resident(WindowRange::PrevLine, 16));
  CHECK(t2.sample_blocks > 0);
}

TEST_CASE("explorer result agrees with the presets' own residency") {
  const WindowSpec spec;
  for (const auto& p : {ArchPreset::baseline(), ArchPreset::type1(), ArchPreset::type2()}) {
    CHECK(minimal_resident_set(spec, p).resident_pixels == p.residency.resident_count());
  }
}

TEST_CASE("no fetch at all means every pixel that cannot be captured must stay") {
  const WindowSpec spec;
  ArchPreset none = budget(spec, {}, 1, true, false, false, 1);
  CHECK_FALSE(explore(spec, none).has_value());
}

TEST_CASE("monotone in fetch budget, forwarding and reconvert over random specs") {
  std::mt19937 rng(2024);
  int checked = 0;
  int both_feasible = 0;
  int strictly_better = 0;
  for (int i = 0; i < 120; ++i) {
    const WindowSpec w = random_spec(rng);
    const auto base = explore(w, budget(w, {2}, 1, false, false, false, 1));
    const auto more_words = explore(w, budget(w, {2}, 2, false, false, false, 1));
    const auto more_cycles = explore(w, budget(w, {0, 1, 2, 3}, 0, false, false, false, 2));
    const auto fwd = explore(w, budget(w, {2}, 1, true, false, false, 1));
    const auto direct = explore(w, budget(w, {0, 1, 2, 3}, 0, true, true, false, 2));
    const auto direct_rc = explore(w, budget(w, {0, 1, 2, 3}, 0, true, true, true, 2));
    const auto fwd_cycles = explore(w, budget(w, {0, 1, 2, 3}, 0, true, false, false, 2));
    CHECK(no_worse(more_words, base));
    CHECK(no_worse(more_cycles, base));
    CHECK(no_worse(fwd, base));
    CHECK(no_worse(fwd_cycles, more_cycles));
    CHECK(no_worse(direct, fwd_cycles));
    CHECK(no_worse(direct_rc, direct));
    ++checked;
    if (base && direct_rc) {
      ++both_feasible;
      strictly_better += *direct_rc < *base;
    }
  }
  CHECK(checked >= 100);
  CHECK(both_feasible >= 20);
  CHECK(strictly_better >= 20);
}
