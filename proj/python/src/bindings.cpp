#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

#include "dbesim/config.hpp"
#include "dbesim/engine.hpp"
#include "dbesim/errors.hpp"
#include "dbesim/explore.hpp"
#include "dbesim/oracle.hpp"
#include "dbesim/report.hpp"

namespace py = pybind11;
using namespace dbesim;

namespace {

using Triple = std::tuple<int, int, int>;

Triple to_tuple(const PixelValue& p) { return {p.c0, p.c1, p.c2}; }

py::dict plan_summary(const GeometryPlan& p) {
  py::dict d;
  d["width"] = p.width();
  d["height"] = p.height();
  d["columns"] = p.columns();
  d["slice_width"] = p.slice_width();
  d["slice_height"] = p.slice_height();
  d["blocks_per_slice_line"] = p.blocks_per_slice_line();
  d["blocks_per_blockline"] = p.blocks_per_blockline();
  d["blocklines"] = p.blocklines();
  d["total_blocks"] = p.total_blocks();
  d["partition_words"] = p.partition_words();
  py::list bases;
  for (int s = 0; s < p.columns(); ++s) bases.append(p.partition_base(s));
  d["partition_bases"] = bases;
  return d;
}

Interleave interleave_of(const std::string& s) {
  if (s == "column_major") return Interleave::ColumnMajor;
  if (s == "round_robin") return Interleave::RoundRobin;
  throw ConfigError("unknown interleave '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cycle-accurate display back-end memory simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("ycocg_from_rgb", [](int r, int g, int b) {
    return to_tuple(ycocg_from_rgb(PixelValue{r, g, b, ColorSpace::RGB}));
  }, py::arg("r"), py::arg("g"), py::arg("b"));
  m.def("rgb_from_ycocg", [](int y, int co, int cg, int bit_depth) {
    return to_tuple(rgb_from_ycocg(PixelValue{y, co, cg, ColorSpace::YCoCg}, bit_depth));
  }, py::arg("y"), py::arg("co"), py::arg("cg"), py::arg("bit_depth") = 10);
  m.def("golden_rgb", [](int x, int y, std::uint64_t seed, int bit_depth) {
    return to_tuple(GoldenOracle(seed, bit_depth).golden_rgb(x, y));
  }, py::arg("x"), py::arg("y"), py::arg("seed") = 0, py::arg("bit_depth") = 10);

  m.def("geometry", [](int width, int height, int columns, const std::string& interleave) {
    return plan_summary(build_geometry(ImageGeometry{width, height},
                                      SliceLayout{columns, 1, interleave_of(interleave)}));
  }, py::arg("width"), py::arg("height"), py::arg("columns") = 1,
     py::arg("interleave") = "column_major");
  m.def("decode_order", [](int width, int height, int columns, const std::string& interleave) {
    const GeometryPlan p = build_geometry(ImageGeometry{width, height},
                                          SliceLayout{columns, 1, interleave_of(interleave)});
    std::vector<std::tuple<int, int, int>> out;
    for (const BlockCoord& b : decode_order(p)) out.emplace_back(b.slice_col, b.block_x, b.blockline);
    return out;
  }, py::arg("width"), py::arg("height"), py::arg("columns") = 1,
     py::arg("interleave") = "column_major");

  m.def("normalize_config", [](const std::string& text) { return config_to_json(parse_config(text)); },
        py::arg("config_json"), "Parse and re-serialize a config, filling defaults.");

  m.def("simulate", [](const std::string& text, bool trace) {
    SimConfig cfg = parse_config(text);
    cfg.record_trace = cfg.record_trace || trace;
    SimOutcome out;
    {
      py::gil_scoped_release release;
      out = run_simulation(cfg);
    }
    return std::make_pair(report_to_json(out.report),
                          cfg.record_trace ? trace_to_csv(out.trace) : std::string());
  }, py::arg("config_json"), py::arg("trace") = false,
     "Run a config; returns (report JSON, trace CSV or empty string).");

  m.def("accounting", [](const std::string& text) {
    const SimConfig cfg = parse_config(text);
    const BufferAccounting a =
        buffer_accounting(effective_arch(cfg), build_geometry(cfg.image, cfg.slices));
    py::dict d;
    d["line_buffer_bits_total"] = a.line_buffer_bits_total;
    d["recon_pixels_per_slice"] = a.recon_pixels_per_slice;
    d["recon_bits_per_slice"] = a.recon_bits_per_slice;
    d["recon_bits_total"] = a.recon_bits_total;
    d["recon_bytes_per_slice"] = a.recon_bytes_per_slice;
    d["recon_bytes_total"] = a.recon_bytes_total;
    d["ycocg_extra_bits_per_slice"] = a.ycocg_extra_bits_per_slice;
    py::dict red;
    red["line_buffer_pct"] = a.reductions_vs_baseline.line_buffer_pct;
    red["recon_pct"] = a.reductions_vs_baseline.recon_pct;
    d["reductions_vs_baseline"] = red;
    return d;
  }, py::arg("config_json"));

  m.def("fps", [](int width, int height, double mhz, int ppc) {
    const ThroughputMetrics t = throughput_metrics(mhz, ppc, ImageGeometry{width, height});
    return std::make_pair(t.mpixels_per_sec, t.fps);
  }, py::arg("width"), py::arg("height"), py::arg("mhz") = 200.0, py::arg("ppc") = 4,
     "Returns (Mpixel/s, frames/s).");

  m.def("explore", [](const std::string& text) {
    const SimConfig cfg = parse_config(text);
    ExplorerResult r;
    {
      py::gil_scoped_release release;
      r = minimal_resident_set(cfg.arch.window, effective_arch(cfg));
    }
    py::dict d;
    d["resident_pixels"] = r.resident_pixels;
    d["sets_evaluated"] = r.sets_evaluated;
    d["sample_blocks"] = r.sample_blocks;
    py::list runs;
    for (const auto& run : r.policy.runs()) runs.append(py::make_tuple(to_string(run.range), run.lo, run.hi));
    d["runs"] = runs;
    return d;
  }, py::arg("config_json"), "Minimal resident set for the config's arch budget and window.");
}
