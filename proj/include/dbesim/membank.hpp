#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dbesim/geometry.hpp"
#include "dbesim/oracle.hpp"

namespace dbesim {

enum class AccessOp : std::uint8_t { Read, Write };
enum class Purpose : std::uint8_t { WriteBlockRow, OutputRead, PredictFetch };

struct AccessRecord {
  std::int64_t cycle = 0;
  int slice = 0;
  int buffer = 0;
  int bank = 0;
  AccessOp op = AccessOp::Read;
  int word = 0;  // bank-local word index
  Purpose purpose = Purpose::OutputRead;
  std::int64_t block = -1;
  // Image line carried by a write, or the line a read expects to find.
  int line = -1;

  bool operator==(const AccessRecord&) const = default;
};

using WordData = std::array<PixelValue, kWordPixels>;

struct StoredWord {
  WordData pixels{};
  std::int64_t writer_block = -1;
  std::int64_t write_cycle = -1;
  int line = -1;
  bool written = false;
};

enum class ViolationKind : std::uint8_t { Conflict, Hazard, Underflow };

struct Violation {
  ViolationKind kind = ViolationKind::Conflict;
  AccessRecord access;
  // Conflict: the access that won the port. Hazard: the write whose data was lost.
  std::optional<AccessRecord> other;
};

struct AccessResult {
  AccessRecord record;
  bool granted = false;
  StoredWord data;  // read results only
};

enum class Grant { Granted, Conflict };

/// Single-port SRAM bank. Requests queue per cycle; commit_cycle grants the first
/// request of a cycle and records every further one as a conflict.
class SramBankModel {
 public:
  SramBankModel(int buffer_id, int bank_id, int depth);

  int buffer_id() const { return buffer_id_; }
  int bank_id() const { return bank_id_; }
  int depth() const { return depth_; }
  std::int64_t frontier() const { return frontier_; }

  /// Conflict is returned when the (bank, cycle) port is already claimed; the
  /// request is still queued so commit_cycle can log it.
  Grant request_access(const AccessRecord& rec, const WordData* payload = nullptr);

  std::vector<Violation> commit_cycle(std::int64_t cycle,
                                      std::vector<AccessResult>* results = nullptr);

  /// A write to `word` before `count` OutputReads have drained it is a hazard.
  void register_required_reads(int word, int count);
  int pending_required_reads(int word) const { return required_reads_.at(word); }

  const StoredWord& peek(int word) const { return contents_.at(word); }
  StoredWord& mutable_word(int word) { return contents_.at(word); }

  void set_trace(std::vector<AccessRecord>* sink) { trace_ = sink; }

 private:
  struct Pending {
    AccessRecord rec;
    WordData payload;
  };

  int buffer_id_;
  int bank_id_;
  int depth_;
  std::int64_t frontier_ = 0;
  std::vector<StoredWord> contents_;
  std::vector<int> required_reads_;
  std::vector<Pending> queue_;
  std::vector<AccessRecord>* trace_ = nullptr;
};

/// Register-file storage: any number of same-cycle accesses, bounded occupancy.
class DffFileModel {
 public:
  explicit DffFileModel(int capacity = 0) : capacity_(capacity) {}

  int capacity() const { return capacity_; }
  int occupancy() const { return static_cast<int>(contents_.size()); }
  int max_occupancy() const { return max_occupancy_; }

  /// False (and nothing stored) when full. Re-inserting an existing tag overwrites it.
  bool insert(std::uint64_t tag, const PixelValue& v);
  const PixelValue* find(std::uint64_t tag) const;
  bool contains(std::uint64_t tag) const { return contents_.count(tag) != 0; }
  void erase(std::uint64_t tag) { contents_.erase(tag); }
  void clear() { contents_.clear(); }

  template <typename Pred>
  void erase_if(Pred pred) {
    for (auto it = contents_.begin(); it != contents_.end();) {
      if (pred(it->first)) {
        it = contents_.erase(it);
      } else {
        ++it;
      }
    }
  }

 private:
  int capacity_;
  int max_occupancy_ = 0;
  std::unordered_map<std::uint64_t, PixelValue> contents_;
};

std::string to_string(AccessOp op);
std::string to_string(Purpose p);
std::string to_string(ViolationKind k);

}  // namespace dbesim
