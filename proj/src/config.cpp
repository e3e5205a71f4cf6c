#include "dbesim/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "dbesim/errors.hpp"
#include "json.hpp"

namespace dbesim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

Chroma chroma_from_string(const std::string& s) {
  if (s == "C444" || s == "444") return Chroma::C444;
  if (s == "C422" || s == "422") return Chroma::C422;
  throw ConfigError("unknown chroma '" + s + "'");
}

Interleave interleave_from_string(const std::string& s) {
  if (s == "column_major") return Interleave::ColumnMajor;
  if (s == "round_robin") return Interleave::RoundRobin;
  throw ConfigError("unknown interleave '" + s + "'");
}

LineDelay line_delay_from_string(const std::string& s) {
  if (s == "one_line") return LineDelay::OneLine;
  if (s == "half_line") return LineDelay::HalfLine;
  throw ConfigError("unknown line_delay '" + s + "'");
}

BankRule bank_rule_from_string(const std::string& s) {
  if (s == "none") return BankRule::None;
  if (s == "by_block_parity") return BankRule::ByBlockParity;
  throw ConfigError("unknown bank_rule '" + s + "'");
}

std::string to_string(BankRule r) { return r == BankRule::None ? "none" : "by_block_parity"; }

Span parse_span(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ConfigError(where + " must be [lo, hi]");
  }
  return Span{j[0].get<int>(), j[1].get<int>()};
}

WindowSpec parse_window(const json& j) {
  const std::string where = "window_spec";
  check_keys(j, {"prev_line", "cur_row0", "cur_row1"}, where);
  WindowSpec w;
  for (WindowRange r : kAllRanges) {
    const std::string name = to_string(r);
    if (j.contains(name)) w.span(r) = parse_span(j.at(name), where + "." + name);
  }
  w.validate();
  return w;
}

ArchPreset parse_arch(const json& j, const WindowSpec& window) {
  if (j.is_string()) {
    const PresetName n = preset_from_string(j.get<std::string>());
    if (n == PresetName::Custom) throw ConfigError("a custom arch must be given as an object");
    return ArchPreset::by_name(n, window);
  }
  const std::string where = "arch";
  check_keys(j,
             {"base", "line_delay", "line_buffers", "banks_per_buffer", "bank_rule",
              "fetch_offsets", "fetch_words_per_slot", "direct_fetch", "forwarding",
              "reconvert_on_fetch", "recon_capacity", "resident"},
             where);
  const PresetName base = preset_from_string(get_or<std::string>(j, "base", "Baseline", where));
  if (base == PresetName::Custom) throw ConfigError("arch.base must name a preset");
  ArchPreset a = ArchPreset::by_name(base, window);
  bool changed = false;
  auto mark = [&](const char* key) {
    const bool has = j.contains(key);
    changed = changed || has;
    return has;
  };
  if (mark("line_delay")) a.line_delay = line_delay_from_string(get<std::string>(j, "line_delay", where));
  if (mark("line_buffers")) a.line_buffers = get<int>(j, "line_buffers", where);
  if (mark("banks_per_buffer")) a.banks_per_buffer = get<int>(j, "banks_per_buffer", where);
  if (mark("bank_rule")) a.bank_rule = bank_rule_from_string(get<std::string>(j, "bank_rule", where));
  if (mark("fetch_offsets")) a.fetch_offsets = get<std::vector<int>>(j, "fetch_offsets", where);
  if (mark("fetch_words_per_slot")) a.fetch_words_per_slot = get<int>(j, "fetch_words_per_slot", where);
  if (mark("direct_fetch")) a.direct_fetch = get<bool>(j, "direct_fetch", where);
  const bool fwd = mark("forwarding") ? get<bool>(j, "forwarding", where) : a.forwarding();
  const bool rec = mark("reconvert_on_fetch") ? get<bool>(j, "reconvert_on_fetch", where)
                                              : a.reconvert_on_fetch();
  if (mark("resident")) {
    const json& runs_j = j.at("resident");
    if (!runs_j.is_array()) throw ConfigError("arch.resident must be a list");
    std::vector<ResidencyPolicy::Run> runs;
    for (const auto& r : runs_j) {
      check_keys(r, {"range", "lo", "hi"}, "arch.resident[]");
      runs.push_back({window_range_from_string(get<std::string>(r, "range", "arch.resident[]")),
                      get<int>(r, "lo", "arch.resident[]"), get<int>(r, "hi", "arch.resident[]")});
    }
    a.residency = ResidencyPolicy::from_runs(window, runs, fwd, rec);
    a.recon_capacity = a.residency.resident_count();
  } else {
    // Keep the base preset's resident positions, minus anything now forwarded.
    const auto runs = a.residency.runs();
    a.residency = ResidencyPolicy::from_runs(window, runs, fwd, rec);
  }
  if (mark("recon_capacity")) a.recon_capacity = get<int>(j, "recon_capacity", where);
  if (changed) a.name = PresetName::Custom;
  a.validate();
  return a;
}

WordCorruption parse_corruption(const json& j) {
  const std::string where = "faults.corrupt_words[]";
  check_keys(j, {"buffer", "bank", "word", "cycle"}, where);
  return WordCorruption{get<int>(j, "buffer", where), get_or<int>(j, "bank", 0, where),
                        get<int>(j, "word", where), get<std::int64_t>(j, "cycle", where)};
}

FaultSpec parse_faults_json(const json& j) {
  const std::string where = "faults";
  check_keys(j,
             {"recon_capacity", "line_buffers", "line_delay", "banks_per_buffer", "forwarding",
              "extra_fetch", "corrupt_word", "corrupt_words"},
             where);
  FaultSpec f;
  if (j.contains("recon_capacity")) f.recon_capacity = get<int>(j, "recon_capacity", where);
  if (j.contains("line_buffers")) f.line_buffers = get<int>(j, "line_buffers", where);
  if (j.contains("line_delay")) {
    f.line_delay = line_delay_from_string(get<std::string>(j, "line_delay", where));
  }
  if (j.contains("banks_per_buffer")) f.banks_per_buffer = get<int>(j, "banks_per_buffer", where);
  if (j.contains("forwarding")) f.forwarding = get<bool>(j, "forwarding", where);
  f.extra_fetch = get_or<bool>(j, "extra_fetch", false, where);
  if (j.contains("corrupt_word")) f.corrupt_words.push_back(parse_corruption(j.at("corrupt_word")));
  if (j.contains("corrupt_words")) {
    if (!j.at("corrupt_words").is_array()) throw ConfigError("faults.corrupt_words must be a list");
    for (const auto& c : j.at("corrupt_words")) f.corrupt_words.push_back(parse_corruption(c));
  }
  return f;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

WindowRange window_range_from_string(const std::string& s) {
  for (WindowRange r : kAllRanges) {
    if (to_string(r) == s) return r;
  }
  throw ConfigError("unknown window range '" + s + "'");
}

FaultSpec parse_faults(const std::string& text) { return parse_faults_json(parse_json(text)); }

SimConfig parse_config(const std::string& text) {
  const json j = parse_json(text);
  check_keys(j,
             {"image", "slices", "arch", "clock_mhz", "throughput_ppc", "seed", "window_spec",
              "faults", "sram_read_latency", "trace"},
             "config");
  SimConfig c;
  const json& img = j.contains("image") ? j.at("image") : throw ConfigError("missing key 'image'");
  check_keys(img, {"width", "height", "chroma", "bit_depth"}, "image");
  c.image.width = get<int>(img, "width", "image");
  c.image.height = get<int>(img, "height", "image");
  c.image.chroma = chroma_from_string(get_or<std::string>(img, "chroma", "C444", "image"));
  c.image.bit_depth = get_or<int>(img, "bit_depth", 10, "image");

  if (j.contains("slices")) {
    const json& sl = j.at("slices");
    check_keys(sl, {"columns", "rows", "interleave"}, "slices");
    c.slices.columns = get_or<int>(sl, "columns", 1, "slices");
    c.slices.rows = get_or<int>(sl, "rows", 1, "slices");
    c.slices.interleave =
        interleave_from_string(get_or<std::string>(sl, "interleave", "column_major", "slices"));
  }

  const WindowSpec window = j.contains("window_spec") ? parse_window(j.at("window_spec")) : WindowSpec{};
  c.arch = j.contains("arch") ? parse_arch(j.at("arch"), window) : ArchPreset::type2(window);
  c.clock_mhz = get_or<double>(j, "clock_mhz", 200.0, "config");
  c.throughput_ppc = get_or<int>(j, "throughput_ppc", 4, "config");
  c.seed = get_or<std::uint64_t>(j, "seed", 0, "config");
  c.sram_read_latency = get_or<int>(j, "sram_read_latency", 0, "config");
  c.record_trace = get_or<bool>(j, "trace", false, "config");
  if (j.contains("faults")) c.faults = parse_faults_json(j.at("faults"));
  c.validate();
  (void)effective_arch(c);
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const SimConfig& c) {
  ordered_json j;
  j["image"] = {{"width", c.image.width},
                {"height", c.image.height},
                {"chroma", to_string(c.image.chroma)},
                {"bit_depth", c.image.bit_depth}};
  j["slices"] = {{"columns", c.slices.columns},
                 {"rows", c.slices.rows},
                 {"interleave", to_string(c.slices.interleave)}};
  ordered_json w;
  for (WindowRange r : kAllRanges) w[to_string(r)] = {c.arch.window.span(r).lo, c.arch.window.span(r).hi};
  j["window_spec"] = w;
  const ArchPreset& a = c.arch;
  ordered_json arch;
  arch["base"] = "Baseline";
  arch["line_delay"] = to_string(a.line_delay);
  arch["line_buffers"] = a.line_buffers;
  arch["banks_per_buffer"] = a.banks_per_buffer;
  arch["bank_rule"] = to_string(a.bank_rule);
  arch["fetch_offsets"] = a.fetch_offsets;
  arch["fetch_words_per_slot"] = a.fetch_words_per_slot;
  arch["direct_fetch"] = a.direct_fetch;
  arch["forwarding"] = a.forwarding();
  arch["reconvert_on_fetch"] = a.reconvert_on_fetch();
  ordered_json runs = ordered_json::array();
  for (const auto& r : a.residency.runs()) {
    runs.push_back({{"range", to_string(r.range)}, {"lo", r.lo}, {"hi", r.hi}});
  }
  arch["resident"] = runs;
  arch["recon_capacity"] = a.recon_capacity;
  if (a.name == PresetName::Custom) {
    j["arch"] = arch;
  } else {
    j["arch"] = to_string(a.name);
  }
  j["clock_mhz"] = c.clock_mhz;
  j["throughput_ppc"] = c.throughput_ppc;
  j["seed"] = c.seed;
  j["sram_read_latency"] = c.sram_read_latency;
  j["trace"] = c.record_trace;
  if (!c.faults.empty()) {
    ordered_json f;
    const FaultSpec& fs = c.faults;
    if (fs.recon_capacity) f["recon_capacity"] = *fs.recon_capacity;
    if (fs.line_buffers) f["line_buffers"] = *fs.line_buffers;
    if (fs.line_delay) f["line_delay"] = to_string(*fs.line_delay);
    if (fs.banks_per_buffer) f["banks_per_buffer"] = *fs.banks_per_buffer;
    if (fs.forwarding) f["forwarding"] = *fs.forwarding;
    if (fs.extra_fetch) f["extra_fetch"] = true;
    if (!fs.corrupt_words.empty()) {
      ordered_json list = ordered_json::array();
      for (const auto& cw : fs.corrupt_words) {
        list.push_back({{"buffer", cw.buffer}, {"bank", cw.bank}, {"word", cw.word}, {"cycle", cw.cycle}});
      }
      f["corrupt_words"] = list;
    }
    j["faults"] = f;
  }
  return j.dump(2) + "\n";
}

}  // namespace dbesim
