#include "dbesim/cli.hpp"

#include <cstdio>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dbesim/config.hpp"
#include "dbesim/engine.hpp"
#include "dbesim/errors.hpp"
#include "dbesim/explore.hpp"
#include "dbesim/report.hpp"

namespace dbesim {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolations = 1;
constexpr int kExitError = 2;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void print_summary(std::ostream& os, const SimReport& r) {
  const ViolationCounts& v = r.violations;
  os << "preset            " << r.preset << "\n"
     << "result            " << (r.pass ? "PASS" : "FAIL") << "\n"
     << "latency_cycles    " << r.latency_cycles << "\n"
     << "total_cycles      " << r.total_cycles << "\n"
     << "fps               " << fmt("%.2f", r.fps) << " (" << fmt("%.0f", r.mpixels_per_sec)
     << " Mpixel/s)\n"
     << "line_buffer_bits  " << r.line_buffer_bits_total << "\n"
     << "recon_per_slice   " << r.recon_pixels_per_slice << " px, " << r.recon_bits_per_slice
     << " bits, " << r.recon_bytes_per_slice << " B\n"
     << "recon_peak        " << r.max_recon_occupancy << " px\n"
     << "violations        conflicts=" << v.conflicts << " hazards=" << v.hazards
     << " underflows=" << v.underflows << " misses=" << v.availability_misses
     << " output_mismatches=" << v.output_mismatches
     << " prediction_mismatches=" << v.prediction_mismatches << " order=" << v.order_violations
     << " rate=" << v.rate_violations << "\n";
  for (const auto& d : r.violation_details) os << "  " << d << "\n";
}

int run_simulate(const std::string& config, const std::string& trace, const std::string& report) {
  SimConfig cfg = load_config(config);
  if (!trace.empty()) cfg.record_trace = true;
  const SimOutcome out = run_simulation(cfg);
  print_summary(std::cout, out.report);
  if (!report.empty()) emit_report(out.report, report);
  if (!trace.empty()) emit_trace(out.trace, trace);
  return out.report.pass ? kExitPass : kExitViolations;
}

int run_compare(const std::string& config) {
  const SimConfig base = load_config(config);
  const WindowSpec window = base.arch.window;
  std::vector<std::future<SimOutcome>> jobs;
  for (PresetName n : {PresetName::Baseline, PresetName::Type1, PresetName::Type2}) {
    SimConfig c = base;
    c.arch = ArchPreset::by_name(n, window);
    c.record_trace = false;
    jobs.push_back(std::async(std::launch::async, [c] { return run_simulation(c); }));
  }
  std::vector<SimReport> reports;
  for (auto& j : jobs) reports.push_back(j.get().report);

  std::printf("%-9s %12s %9s %10s %11s %8s %9s %9s  %s\n", "preset", "line_bits", "line_red",
              "recon_px", "recon_bits", "B/slice", "B_total", "recon_red", "result");
  bool pass = true;
  for (const auto& r : reports) {
    pass = pass && r.pass;
    std::printf("%-9s %12lld %8.1f%% %10d %11lld %8lld %9lld %8.1f%%  %s\n", r.preset.c_str(),
                static_cast<long long>(r.line_buffer_bits_total),
                r.reductions_vs_baseline.line_buffer_pct, r.recon_pixels_per_slice,
                static_cast<long long>(r.recon_bits_per_slice),
                static_cast<long long>(r.recon_bytes_per_slice),
                static_cast<long long>(r.recon_bytes_total), r.reductions_vs_baseline.recon_pct,
                r.pass ? "PASS" : "FAIL");
  }
  const SimReport& last = reports.back();
  std::printf("recon bits use 30 bits/pixel; YCoCg-R chroma needs %lld more bits per slice (%s)\n",
              static_cast<long long>(last.ycocg_extra_bits_per_slice), last.preset.c_str());
  std::printf("throughput: %.0f Mpixel/s, %.2f fps\n", last.mpixels_per_sec, last.fps);
  return pass ? kExitPass : kExitViolations;
}

int run_explore(const std::string& config) {
  const SimConfig base = load_config(config);
  const WindowSpec window = base.arch.window;
  for (PresetName n : {PresetName::Baseline, PresetName::Type1, PresetName::Type2}) {
    ArchPreset p = ArchPreset::by_name(n, window);
    if (base.sram_read_latency > 0) {
      std::erase_if(p.fetch_offsets,
                    [&](int off) { return off + base.sram_read_latency >= kCyclesPerSlot; });
    }
    std::ostringstream runs;
    try {
      const ExplorerResult r = minimal_resident_set(window, p);
      for (const auto& run : r.policy.runs()) {
        runs << " " << to_string(run.range) << "[" << run.lo << "," << run.hi << "]";
      }
      std::printf("%-9s %4d px  (%lld sets)%s\n", to_string(n).c_str(), r.resident_pixels,
                  static_cast<long long>(r.sets_evaluated), runs.str().c_str());
    } catch (const InfeasibleError& e) {
      std::printf("%-9s infeasible: %s\n", to_string(n).c_str(), e.what());
    }
  }
  return kExitPass;
}

int run_fps(int width, int height, double mhz, int ppc) {
  ImageGeometry g;
  g.width = width;
  g.height = height;
  const ThroughputMetrics m = throughput_metrics(mhz, ppc, g);
  std::printf("mpixels_per_sec %.2f\nfps %.2f\n", m.mpixels_per_sec, m.fps);
  return kExitPass;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Cycle-accurate DBE memory-subsystem simulator"};
  app.require_subcommand(1);

  std::string config, trace, report;
  auto* sim = app.add_subcommand("simulate", "Run one configuration and check every invariant");
  sim->add_option("--config", config, "JSON config file")->required();
  sim->add_option("--trace", trace, "Write the access trace (CSV)");
  sim->add_option("--report", report, "Write the report (JSON)");

  auto* cmp = app.add_subcommand("compare", "Run Baseline, Type1 and Type2 on one image");
  cmp->add_option("--config", config, "JSON config file")->required();

  auto* exp = app.add_subcommand("explore", "Minimal resident set per preset");
  exp->add_option("--config", config, "JSON config file")->required();

  int width = 3840, height = 2160, ppc = 4;
  double mhz = 200.0;
  auto* fps = app.add_subcommand("fps", "Throughput for a resolution and clock");
  fps->add_option("--width", width, "Image width")->required();
  fps->add_option("--height", height, "Image height")->required();
  fps->add_option("--mhz", mhz, "Clock in MHz")->required();
  fps->add_option("--ppc", ppc, "Pixels per cycle")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (sim->parsed()) return run_simulate(config, trace, report);
    if (cmp->parsed()) return run_compare(config);
    if (exp->parsed()) return run_explore(config);
    if (fps->parsed()) return run_fps(width, height, mhz, ppc);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace dbesim
