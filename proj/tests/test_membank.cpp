#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dbesim/errors.hpp"
#include "dbesim/membank.hpp"

using namespace dbesim;

namespace {

AccessRecord rec(std::int64_t cycle, AccessOp op, int word, Purpose p, int line) {
  AccessRecord r;
  r.cycle = cycle;
  r.op = op;
  r.word = word;
  r.purpose = p;
  r.line = line;
  return r;
}

WordData filled(int v) {
  WordData d{};
  for (auto& px : d) px = PixelValue{v, v, v, ColorSpace::RGB};
  return d;
}

}  // namespace

TEST_CASE("one access per cycle; the second is a conflict") {
  SramBankModel bank(0, 0, 8);
  const WordData d = filled(5);
  CHECK(bank.request_access(rec(3, AccessOp::Write, 1, Purpose::WriteBlockRow, 0), &d) ==
        Grant::Granted);
  CHECK(bank.request_access(rec(3, AccessOp::Read, 2, Purpose::PredictFetch, 0)) ==
        Grant::Conflict);
  std::vector<AccessResult> results;
  const auto v = bank.commit_cycle(3, &results);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::Conflict);
  CHECK(v[0].access.purpose == Purpose::PredictFetch);
  REQUIRE(v[0].other.has_value());
  CHECK(v[0].other->purpose == Purpose::WriteBlockRow);
  REQUIRE(results.size() == 2);
  CHECK(results[0].granted);
  CHECK_FALSE(results[1].granted);
  CHECK(bank.peek(1).pixels == d);
}

TEST_CASE("accesses in different cycles never conflict") {
  SramBankModel bank(0, 0, 8);
  const WordData d = filled(1);
  bank.request_access(rec(0, AccessOp::Write, 0, Purpose::WriteBlockRow, 0), &d);
  bank.request_access(rec(1, AccessOp::Read, 0, Purpose::OutputRead, 0));
  CHECK(bank.commit_cycle(0).empty());
  std::vector<AccessResult> results;
  CHECK(bank.commit_cycle(1, &results).empty());
  REQUIRE(results.size() == 1);
  CHECK(results[0].data.pixels == d);
  CHECK(results[0].data.line == 0);
}

TEST_CASE("write over a word with pending output reads is a hazard") {
  SramBankModel bank(1, 0, 4);
  const WordData a = filled(1), b = filled(2);
  bank.request_access(rec(0, AccessOp::Write, 2, Purpose::WriteBlockRow, 1), &a);
  bank.commit_cycle(0);
  bank.register_required_reads(2, 1);
  bank.request_access(rec(4, AccessOp::Write, 2, Purpose::WriteBlockRow, 3), &b);
  const auto v = bank.commit_cycle(4);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::Hazard);
  REQUIRE(v[0].other.has_value());
  CHECK(v[0].other->line == 1);
}

TEST_CASE("draining the read clears the hazard") {
  SramBankModel bank(1, 0, 4);
  const WordData a = filled(1), b = filled(2);
  bank.request_access(rec(0, AccessOp::Write, 2, Purpose::WriteBlockRow, 1), &a);
  bank.commit_cycle(0);
  bank.register_required_reads(2, 1);
  bank.request_access(rec(2, AccessOp::Read, 2, Purpose::OutputRead, 1));
  CHECK(bank.commit_cycle(2).empty());
  CHECK(bank.pending_required_reads(2) == 0);
  bank.request_access(rec(4, AccessOp::Write, 2, Purpose::WriteBlockRow, 3), &b);
  CHECK(bank.commit_cycle(4).empty());
}

TEST_CASE("reading an unwritten or stale word is an underflow") {
  SramBankModel bank(0, 0, 4);
  bank.request_access(rec(0, AccessOp::Read, 0, Purpose::OutputRead, 0));
  auto v = bank.commit_cycle(0);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::Underflow);

  const WordData d = filled(3);
  bank.request_access(rec(1, AccessOp::Write, 1, Purpose::WriteBlockRow, 2), &d);
  bank.commit_cycle(1);
  bank.request_access(rec(2, AccessOp::Read, 1, Purpose::PredictFetch, 4));
  v = bank.commit_cycle(2);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::Underflow);
}

TEST_CASE("trace holds granted accesses only, in order") {
  SramBankModel bank(0, 1, 4);
  std::vector<AccessRecord> trace;
  bank.set_trace(&trace);
  const WordData d = filled(0);
  bank.request_access(rec(0, AccessOp::Write, 0, Purpose::WriteBlockRow, 0), &d);
  bank.request_access(rec(0, AccessOp::Read, 0, Purpose::PredictFetch, 0));
  bank.request_access(rec(1, AccessOp::Read, 0, Purpose::OutputRead, 0));
  bank.commit_cycle(0);
  bank.commit_cycle(1);
  REQUIRE(trace.size() == 2);
  CHECK(trace[0].op == AccessOp::Write);
  CHECK(trace[1].cycle == 1);
}

TEST_CASE("bank rejects out-of-range words and past cycles") {
  SramBankModel bank(0, 0, 4);
  CHECK_THROWS_AS(bank.request_access(rec(0, AccessOp::Read, 4, Purpose::OutputRead, 0)),
                  RangeError);
  bank.commit_cycle(5);
  CHECK_THROWS(bank.request_access(rec(3, AccessOp::Read, 0, Purpose::OutputRead, 0)));
}

TEST_CASE("register file: many same-cycle accesses, bounded occupancy") {
  DffFileModel f(3);
  const PixelValue v{1, 2, 3, ColorSpace::YCoCg};
  CHECK(f.insert(1, v));
  CHECK(f.insert(2, v));
  CHECK(f.insert(3, v));
  CHECK_FALSE(f.insert(4, v));
  CHECK(f.insert(3, PixelValue{9, 9, 9, ColorSpace::YCoCg}));
  CHECK(f.find(3)->c0 == 9);
  CHECK(f.find(4) == nullptr);
  f.erase_if([](std::uint64_t t) { return t % 2 == 1; });
  CHECK(f.occupancy() == 1);
  CHECK(f.max_occupancy() == 3);
}
