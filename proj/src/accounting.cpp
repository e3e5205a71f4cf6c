#include <cmath>

#include "dbesim/errors.hpp"
#include "dbesim/report.hpp"

namespace dbesim {

namespace {

std::int64_t line_buffer_bits(int line_buffers) {
  return static_cast<std::int64_t>(line_buffers) * kLineWords * kWordBits;
}

std::int64_t ceil_bytes(std::int64_t bits) { return (bits + 7) / 8; }

double reduction_pct(double value, double reference) {
  return reference > 0 ? (1.0 - value / reference) * 100.0 : 0.0;
}

}  // namespace

BufferAccounting buffer_accounting(const ArchPreset& preset, const GeometryPlan& plan) {
  BufferAccounting a;
  a.line_buffer_bits_total = line_buffer_bits(preset.line_buffers);
  a.recon_pixels_per_slice = preset.recon_capacity;
  a.recon_bits_per_slice = static_cast<std::int64_t>(preset.recon_capacity) * kAccountingBitsPerPixel;
  a.recon_bits_total = a.recon_bits_per_slice * plan.columns();
  a.recon_bytes_per_slice = ceil_bytes(a.recon_bits_per_slice);
  a.recon_bytes_total = ceil_bytes(a.recon_bits_total);

  int ycocg_resident = 0;
  for (WindowRange r : {WindowRange::CurRow0, WindowRange::CurRow1}) {
    const Span& s = preset.window.span(r);
    for (int rel = s.lo; rel <= s.hi; ++rel) {
      if (preset.residency.is_resident(r, rel) && !preset.residency.is_forwarded(r, rel)) {
        ++ycocg_resident;
      }
    }
  }
  a.ycocg_extra_bits_per_slice = 2LL * ycocg_resident;

  const ArchPreset ref = ArchPreset::baseline(preset.window);
  a.reductions_vs_baseline.line_buffer_pct =
      reduction_pct(static_cast<double>(a.line_buffer_bits_total),
                    static_cast<double>(line_buffer_bits(ref.line_buffers)));
  a.reductions_vs_baseline.recon_pct =
      reduction_pct(preset.recon_capacity, ref.recon_capacity);
  return a;
}

ThroughputMetrics throughput_metrics(double clock_mhz, int pixels_per_cycle,
                                     const ImageGeometry& image) {
  if (!(clock_mhz > 0.0)) throw ConfigError("clock must be positive");
  if (pixels_per_cycle <= 0) throw ConfigError("pixels per cycle must be positive");
  if (image.width <= 0 || image.height <= 0) throw ConfigError("image must be non-empty");
  ThroughputMetrics m;
  m.mpixels_per_sec = clock_mhz * pixels_per_cycle;
  const double fps = clock_mhz * 1e6 * pixels_per_cycle /
                     (static_cast<double>(image.width) * image.height);
  m.fps = std::round(fps * 100.0) / 100.0;
  return m;
}

}  // namespace dbesim
