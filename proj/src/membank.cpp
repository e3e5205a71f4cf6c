#include "dbesim/membank.hpp"

#include <stdexcept>

#include "dbesim/errors.hpp"

namespace dbesim {

SramBankModel::SramBankModel(int buffer_id, int bank_id, int depth)
    : buffer_id_(buffer_id),
      bank_id_(bank_id),
      depth_(depth),
      contents_(static_cast<std::size_t>(depth)),
      required_reads_(static_cast<std::size_t>(depth), 0) {}

Grant SramBankModel::request_access(const AccessRecord& rec, const WordData* payload) {
  if (rec.cycle < frontier_) {
    throw std::logic_error("access for cycle " + std::to_string(rec.cycle) +
                           " behind bank frontier " + std::to_string(frontier_));
  }
  if (rec.word < 0 || rec.word >= depth_) {
    throw RangeError("word " + std::to_string(rec.word) + " outside bank depth " +
                     std::to_string(depth_));
  }
  Grant g = Grant::Granted;
  for (const auto& p : queue_) {
    if (p.rec.cycle == rec.cycle) {
      g = Grant::Conflict;
      break;
    }
  }
  queue_.push_back(Pending{rec, payload != nullptr ? *payload : WordData{}});
  return g;
}

std::vector<Violation> SramBankModel::commit_cycle(std::int64_t cycle,
                                                   std::vector<AccessResult>* results) {
  std::vector<Violation> violations;
  std::optional<AccessRecord> winner;
  std::size_t keep = 0;
  for (std::size_t i = 0; i < queue_.size(); ++i) {
    Pending& p = queue_[i];
    if (p.rec.cycle != cycle) {
      queue_[keep++] = p;
      continue;
    }
    if (winner) {
      violations.push_back(Violation{ViolationKind::Conflict, p.rec, *winner});
      if (results != nullptr) results->push_back(AccessResult{p.rec, false, {}});
      continue;
    }
    winner = p.rec;
    StoredWord& slot = contents_[static_cast<std::size_t>(p.rec.word)];
    AccessResult res{p.rec, true, {}};
    if (p.rec.op == AccessOp::Write) {
      if (required_reads_[static_cast<std::size_t>(p.rec.word)] > 0) {
        AccessRecord lost;
        lost.cycle = slot.write_cycle;
        lost.buffer = buffer_id_;
        lost.bank = bank_id_;
        lost.op = AccessOp::Write;
        lost.word = p.rec.word;
        lost.purpose = Purpose::WriteBlockRow;
        lost.block = slot.writer_block;
        lost.line = slot.line;
        violations.push_back(Violation{ViolationKind::Hazard, p.rec, lost});
      }
      slot.pixels = p.payload;
      slot.writer_block = p.rec.block;
      slot.write_cycle = cycle;
      slot.line = p.rec.line;
      slot.written = true;
      required_reads_[static_cast<std::size_t>(p.rec.word)] = 0;
    } else {
      if (!slot.written || (p.rec.line >= 0 && slot.line < p.rec.line)) {
        violations.push_back(Violation{ViolationKind::Underflow, p.rec, std::nullopt});
      }
      if (p.rec.purpose == Purpose::OutputRead) {
        int& pending = required_reads_[static_cast<std::size_t>(p.rec.word)];
        if (pending > 0) --pending;
      }
      res.data = slot;
    }
    if (trace_ != nullptr) trace_->push_back(p.rec);
    if (results != nullptr) results->push_back(res);
  }
  queue_.resize(keep);
  frontier_ = cycle + 1;
  return violations;
}

void SramBankModel::register_required_reads(int word, int count) {
  if (word < 0 || word >= depth_) throw RangeError("word outside bank depth");
  required_reads_[static_cast<std::size_t>(word)] = count < 0 ? 0 : count;
}

bool DffFileModel::insert(std::uint64_t tag, const PixelValue& v) {
  auto it = contents_.find(tag);
  if (it != contents_.end()) {
    it->second = v;
    return true;
  }
  if (occupancy() >= capacity_) return false;
  contents_.emplace(tag, v);
  if (occupancy() > max_occupancy_) max_occupancy_ = occupancy();
  return true;
}

const PixelValue* DffFileModel::find(std::uint64_t tag) const {
  auto it = contents_.find(tag);
  return it == contents_.end() ? nullptr : &it->second;
}

std::string to_string(AccessOp op) { return op == AccessOp::Read ? "read" : "write"; }

std::string to_string(Purpose p) {
  switch (p) {
    case Purpose::WriteBlockRow: return "WriteBlockRow";
    case Purpose::OutputRead: return "OutputRead";
    case Purpose::PredictFetch: return "PredictFetch";
  }
  return "?";
}

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Conflict: return "conflict";
    case ViolationKind::Hazard: return "hazard";
    case ViolationKind::Underflow: return "underflow";
  }
  return "?";
}

}  // namespace dbesim
