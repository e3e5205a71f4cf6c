#include <fstream>
#include <sstream>

#include "dbesim/errors.hpp"
#include "dbesim/report.hpp"
#include "json.hpp"

namespace dbesim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json violations_json(const ViolationCounts& v) {
  ordered_json j;
  j["conflicts"] = v.conflicts;
  j["hazards"] = v.hazards;
  j["underflows"] = v.underflows;
  j["availability_misses"] = v.availability_misses;
  j["output_mismatches"] = v.output_mismatches;
  j["prediction_mismatches"] = v.prediction_mismatches;
  j["order_violations"] = v.order_violations;
  j["rate_violations"] = v.rate_violations;
  j["total"] = v.total();
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::string report_to_json(const SimReport& r) {
  ordered_json j;
  j["preset"] = r.preset;
  j["pass"] = r.pass;
  j["line_buffer_bits_total"] = r.line_buffer_bits_total;
  j["recon_pixels_per_slice"] = r.recon_pixels_per_slice;
  j["recon_bits_per_slice"] = r.recon_bits_per_slice;
  j["recon_bits_total"] = r.recon_bits_total;
  j["recon_bytes_per_slice"] = r.recon_bytes_per_slice;
  j["recon_bytes_total"] = r.recon_bytes_total;
  j["ycocg_extra_bits_per_slice"] = r.ycocg_extra_bits_per_slice;
  j["violations"] = violations_json(r.violations);
  j["violation_details"] = r.violation_details;
  j["latency_cycles"] = r.latency_cycles;
  j["total_cycles"] = r.total_cycles;
  j["mpixels_per_sec"] = r.mpixels_per_sec;
  j["fps"] = r.fps;
  j["reductions_vs_baseline"] = {{"line_buffer_pct", r.reductions_vs_baseline.line_buffer_pct},
                                 {"recon_pct", r.reductions_vs_baseline.recon_pct}};
  j["max_recon_occupancy"] = r.max_recon_occupancy;
  j["recon_overflows"] = r.recon_overflows;
  j["blocks"] = r.blocks;
  j["pixels_emitted"] = r.pixels_emitted;
  j["served_resident"] = r.served_resident;
  j["served_forwarded"] = r.served_forwarded;
  j["served_fetched"] = r.served_fetched;
  j["predict_fetches"] = r.predict_fetches;
  return j.dump(2) + "\n";
}

SimReport report_from_json(const std::string& text) {
  SimReport r;
  try {
    const json j = json::parse(text);
    r.preset = j.at("preset").get<std::string>();
    r.pass = j.at("pass").get<bool>();
    r.line_buffer_bits_total = j.at("line_buffer_bits_total").get<std::int64_t>();
    r.recon_pixels_per_slice = j.at("recon_pixels_per_slice").get<int>();
    r.recon_bits_per_slice = j.at("recon_bits_per_slice").get<std::int64_t>();
    r.recon_bits_total = j.at("recon_bits_total").get<std::int64_t>();
    r.recon_bytes_per_slice = j.at("recon_bytes_per_slice").get<std::int64_t>();
    r.recon_bytes_total = j.at("recon_bytes_total").get<std::int64_t>();
    r.ycocg_extra_bits_per_slice = j.at("ycocg_extra_bits_per_slice").get<std::int64_t>();
    const json& v = j.at("violations");
    r.violations.conflicts = v.at("conflicts").get<std::int64_t>();
    r.violations.hazards = v.at("hazards").get<std::int64_t>();
    r.violations.underflows = v.at("underflows").get<std::int64_t>();
    r.violations.availability_misses = v.at("availability_misses").get<std::int64_t>();
    r.violations.output_mismatches = v.at("output_mismatches").get<std::int64_t>();
    r.violations.prediction_mismatches = v.at("prediction_mismatches").get<std::int64_t>();
    r.violations.order_violations = v.at("order_violations").get<std::int64_t>();
    r.violations.rate_violations = v.at("rate_violations").get<std::int64_t>();
    r.violation_details = j.at("violation_details").get<std::vector<std::string>>();
    r.latency_cycles = j.at("latency_cycles").get<std::int64_t>();
    r.total_cycles = j.at("total_cycles").get<std::int64_t>();
    r.mpixels_per_sec = j.at("mpixels_per_sec").get<double>();
    r.fps = j.at("fps").get<double>();
    r.reductions_vs_baseline.line_buffer_pct =
        j.at("reductions_vs_baseline").at("line_buffer_pct").get<double>();
    r.reductions_vs_baseline.recon_pct =
        j.at("reductions_vs_baseline").at("recon_pct").get<double>();
    r.max_recon_occupancy = j.at("max_recon_occupancy").get<int>();
    r.recon_overflows = j.at("recon_overflows").get<std::int64_t>();
    r.blocks = j.at("blocks").get<std::int64_t>();
    r.pixels_emitted = j.at("pixels_emitted").get<std::int64_t>();
    r.served_resident = j.at("served_resident").get<std::int64_t>();
    r.served_forwarded = j.at("served_forwarded").get<std::int64_t>();
    r.served_fetched = j.at("served_fetched").get<std::int64_t>();
    r.predict_fetches = j.at("predict_fetches").get<std::int64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return r;
}

void emit_report(const SimReport& r, const std::string& path) { write_file(path, report_to_json(r)); }

std::string trace_to_csv(const AccessTrace& trace) {
  std::ostringstream os;
  os << kTraceHeader << '\n';
  for (const auto& a : trace) {
    os << a.cycle << ',' << a.slice << ',' << a.buffer << ',' << a.bank << ','
       << to_string(a.op) << ',' << a.word << ',' << to_string(a.purpose) << ',' << a.block
       << '\n';
  }
  return os.str();
}

void emit_trace(const AccessTrace& trace, const std::string& path) {
  write_file(path, trace_to_csv(trace));
}

}  // namespace dbesim
