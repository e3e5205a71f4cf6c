#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dbesim/geometry.hpp"
#include "dbesim/membank.hpp"
#include "dbesim/sched.hpp"

namespace dbesim {

struct Reductions {
  double line_buffer_pct = 0.0;
  double recon_pct = 0.0;
  bool operator==(const Reductions&) const = default;
};

struct BufferAccounting {
  std::int64_t line_buffer_bits_total = 0;
  int recon_pixels_per_slice = 0;
  std::int64_t recon_bits_per_slice = 0;
  std::int64_t recon_bits_total = 0;
  std::int64_t recon_bytes_per_slice = 0;  // rounded up
  std::int64_t recon_bytes_total = 0;      // rounded up
  // YCoCg-R chroma needs one sign bit more per component than 30-bit accounting allows.
  std::int64_t ycocg_extra_bits_per_slice = 0;
  Reductions reductions_vs_baseline;
};

inline constexpr int kAccountingBitsPerPixel = 30;

struct ThroughputMetrics {
  double mpixels_per_sec = 0.0;
  double fps = 0.0;  // rounded to 2 decimals
};

struct ViolationCounts {
  std::int64_t conflicts = 0;
  std::int64_t hazards = 0;
  std::int64_t underflows = 0;
  std::int64_t availability_misses = 0;
  std::int64_t output_mismatches = 0;
  std::int64_t prediction_mismatches = 0;
  std::int64_t order_violations = 0;
  std::int64_t rate_violations = 0;

  std::int64_t total() const {
    return conflicts + hazards + underflows + availability_misses + output_mismatches +
           prediction_mismatches + order_violations + rate_violations;
  }
  bool operator==(const ViolationCounts&) const = default;
};

struct ViolationLog {
  static constexpr std::size_t kMaxDetails = 16;
  ViolationCounts counts;
  std::vector<std::string> details;  // first kMaxDetails, human-readable

  void note(std::string detail) {
    if (details.size() < kMaxDetails) details.push_back(std::move(detail));
  }
};

using AccessTrace = std::vector<AccessRecord>;

struct SimReport {
  std::string preset;
  bool pass = false;

  std::int64_t line_buffer_bits_total = 0;
  int recon_pixels_per_slice = 0;
  std::int64_t recon_bits_per_slice = 0;
  std::int64_t recon_bits_total = 0;
  std::int64_t recon_bytes_per_slice = 0;
  std::int64_t recon_bytes_total = 0;
  std::int64_t ycocg_extra_bits_per_slice = 0;
  Reductions reductions_vs_baseline;

  ViolationCounts violations;
  std::vector<std::string> violation_details;

  std::int64_t latency_cycles = 0;
  std::int64_t total_cycles = 0;
  double mpixels_per_sec = 0.0;
  double fps = 0.0;

  int max_recon_occupancy = 0;  // measured, max over slice columns
  std::int64_t recon_overflows = 0;
  std::int64_t blocks = 0;
  std::int64_t pixels_emitted = 0;
  std::int64_t served_resident = 0;
  std::int64_t served_forwarded = 0;
  std::int64_t served_fetched = 0;
  std::int64_t predict_fetches = 0;

  bool operator==(const SimReport&) const = default;
};

BufferAccounting buffer_accounting(const ArchPreset& preset, const GeometryPlan& plan);
ThroughputMetrics throughput_metrics(double clock_mhz, int pixels_per_cycle,
                                     const ImageGeometry& image);

std::string report_to_json(const SimReport& r);
SimReport report_from_json(const std::string& text);
void emit_report(const SimReport& r, const std::string& path);

inline constexpr const char* kTraceHeader = "cycle,slice,buffer,bank,op,word,purpose,block";
std::string trace_to_csv(const AccessTrace& trace);
void emit_trace(const AccessTrace& trace, const std::string& path);

}  // namespace dbesim
