#pragma once

#include <string>

#include "dbesim/engine.hpp"

namespace dbesim {

/// Parses a JSON config document. Unknown keys anywhere are ConfigErrors.
///   image{width,height,chroma,bit_depth}, slices{columns,rows,interleave},
///   arch (preset name or object), clock_mhz, throughput_ppc, seed,
///   window_spec?, faults?, sram_read_latency?, trace?
SimConfig parse_config(const std::string& text);
/// Throws IoError if the file cannot be read.
SimConfig load_config(const std::string& path);
/// Canonical JSON form; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const SimConfig& cfg);

FaultSpec parse_faults(const std::string& text);
WindowRange window_range_from_string(const std::string& s);

}  // namespace dbesim
