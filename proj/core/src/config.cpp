#include "parax/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "parax/errors.hpp"

namespace parax {
namespace {

struct RawEntry {
  std::string value;
  int line = 0;
};

using RawTable = std::map<std::pair<std::string, std::string>, RawEntry>;

constexpr std::array<std::pair<const char*, const char*>, 16> known_keys{{
    {"optics", "lambda"},
    {"optics", "n1"},
    {"optics", "n2"},
    {"source", "kind"},
    {"source", "beta0"},
    {"source", "z0"},
    {"source", "decay"},
    {"geometry", "R"},
    {"geometry", "Z"},
    {"geometry", "R1"},
    {"grid", "M"},
    {"grid", "N"},
    {"postlens", "length"},
    {"postlens", "steps"},
    {"output", "snapshot_stride"},
    {"output", "binary"},
}};

bool key_known(const std::string& section, const std::string& key) {
  for (const auto& [s, k] : known_keys)
    if (section == s && key == k) return true;
  return false;
}

bool section_known(const std::string& section) {
  for (const auto& [s, k] : known_keys)
    if (section == s) return true;
  return false;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::string_view origin, int line, const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << what;
  throw ConfigError(os.str());
}

RawTable tokenize(std::string_view text, std::string_view origin) {
  RawTable table;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!section_known(section)) fail(origin, line_no, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(origin, line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (section.empty()) fail(origin, line_no, "key before any [section]");
    if (!key_known(section, key))
      fail(origin, line_no, "unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) fail(origin, line_no, "empty value for '" + key + "'");
    auto [it, inserted] = table.try_emplace({section, key}, RawEntry{value, line_no});
    if (!inserted)
      fail(origin, line_no,
           "duplicate key '" + key + "' (first at line " + std::to_string(it->second.line) + ")");
  }
  return table;
}

class Resolver {
 public:
  Resolver(RawTable table, std::string_view origin)
      : table_(std::move(table)), origin_(origin) {}

  bool has(const char* section, const char* key) const {
    return table_.contains({section, key});
  }

  const RawEntry& entry(const char* section, const char* key) const {
    auto it = table_.find({section, key});
    if (it == table_.end())
      throw ConfigError(std::string(origin_) + ": missing required key '" + key + "' in [" +
                        section + "]");
    return it->second;
  }

  double number(const char* section, const char* key) const {
    const RawEntry& e = entry(section, key);
    double out = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
      fail(origin_, e.line, "invalid number '" + e.value + "' for '" + key + "'");
    if (!std::isfinite(out))
      fail(origin_, e.line, "nonfinite value for '" + std::string(key) + "'");
    return out;
  }

  int integer(const char* section, const char* key) const {
    const RawEntry& e = entry(section, key);
    int out = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
      fail(origin_, e.line, "invalid integer '" + e.value + "' for '" + key + "'");
    return out;
  }

  bool flag(const char* section, const char* key) const {
    const RawEntry& e = entry(section, key);
    if (e.value == "0" || e.value == "false") return false;
    if (e.value == "1" || e.value == "true") return true;
    fail(origin_, e.line, "expected 0/1/false/true for '" + std::string(key) + "'");
  }

  [[noreturn]] void reject(const char* section, const char* key,
                           const std::string& why) const {
    const RawEntry& e = entry(section, key);
    fail(origin_, e.line, why);
  }

  std::string_view origin() const { return origin_; }

 private:
  RawTable table_;
  std::string_view origin_;
};

void append_number(std::string& out, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
  out += buf;
}

void append_integer(std::string& out, const char* key, long long v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s = %lld\n", key, v);
  out += buf;
}

}  // namespace

SimulationConfig parse_config_text(std::string_view text, std::string_view origin) {
  const Resolver r(tokenize(text, origin), origin);
  SimulationConfig c;
  try {
    c.wavelength = r.number("optics", "lambda");
    c.index_outside = r.number("optics", "n1");
    c.index_lens = r.number("optics", "n2");
    make_optical_parameters(c.wavelength, c.index_outside, c.index_lens);

    c.sphere_radius = r.number("geometry", "R");
    c.axial_extent = r.number("geometry", "Z");
    const LensGeometry g =
        r.has("geometry", "R1")
            ? make_lens_geometry(c.sphere_radius, c.axial_extent, r.number("geometry", "R1"))
            : make_lens_geometry(c.sphere_radius, c.axial_extent);
    c.aperture = g.aperture;

    if (r.has("source", "kind")) {
      const RawEntry& e = r.entry("source", "kind");
      if (e.value == "gaussian")
        c.source_kind = SourceKind::gaussian;
      else if (e.value == "exponential")
        c.source_kind = SourceKind::exponential;
      else
        r.reject("source", "kind", "source kind must be gaussian or exponential");
    }
    if (c.source_kind == SourceKind::gaussian) {
      c.waist = r.has("source", "beta0") ? r.number("source", "beta0") : c.aperture / 4.0;
      c.emitter_z = r.has("source", "z0") ? r.number("source", "z0") : -c.axial_extent;
      if (!(c.waist > 0.0)) r.reject("source", "beta0", "beta0 must be positive");
      if (c.emitter_z == 0.0) r.reject("source", "z0", "z0 must be nonzero");
      if (r.has("source", "decay"))
        r.reject("source", "decay", "decay applies only to the exponential source");
    } else {
      if (!r.has("source", "decay"))
        throw ConfigError(std::string(r.origin()) +
                          ": exponential source requires 'decay' in [source]");
      c.decay_length = r.number("source", "decay");
      if (!(c.decay_length > 0.0)) r.reject("source", "decay", "decay must be positive");
      if (r.has("source", "beta0"))
        r.reject("source", "beta0", "beta0 applies only to the gaussian source");
      if (r.has("source", "z0"))
        r.reject("source", "z0", "z0 applies only to the gaussian source");
    }

    c.m_intervals = r.integer("grid", "M");
    c.lens_steps = r.integer("grid", "N");
    if (c.m_intervals < 2) r.reject("grid", "M", "need M >= 2");
    if (c.lens_steps < 1) r.reject("grid", "N", "need N >= 1");

    const double lens_tau = c.axial_extent / c.lens_steps;
    c.post_length =
        r.has("postlens", "length") ? r.number("postlens", "length") : 4.0 * c.axial_extent;
    if (!(c.post_length > 0.0)) r.reject("postlens", "length", "length must be positive");
    c.post_steps = r.has("postlens", "steps")
                       ? r.integer("postlens", "steps")
                       : static_cast<int>(std::llround(c.post_length / lens_tau));
    if (c.post_steps < 1) {
      if (r.has("postlens", "steps"))
        r.reject("postlens", "steps", "need steps >= 1");
      c.post_steps = 1;
    }

    if (r.has("output", "snapshot_stride")) {
      c.snapshot_stride = r.integer("output", "snapshot_stride");
      if (c.snapshot_stride < 0)
        r.reject("output", "snapshot_stride", "snapshot_stride must be nonnegative");
    }
    if (r.has("output", "binary")) c.binary_snapshots = r.flag("output", "binary");
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  return c;
}

SimulationConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string echo_config(const SimulationConfig& c) {
  std::string out;
  out += "[optics]\n";
  append_number(out, "lambda", c.wavelength);
  append_number(out, "n1", c.index_outside);
  append_number(out, "n2", c.index_lens);
  out += "\n[source]\n";
  if (c.source_kind == SourceKind::gaussian) {
    out += "kind = gaussian\n";
    append_number(out, "beta0", c.waist);
    append_number(out, "z0", c.emitter_z);
  } else {
    out += "kind = exponential\n";
    append_number(out, "decay", c.decay_length);
  }
  out += "\n[geometry]\n";
  append_number(out, "R", c.sphere_radius);
  append_number(out, "Z", c.axial_extent);
  append_number(out, "R1", c.aperture);
  out += "\n[grid]\n";
  append_integer(out, "M", c.m_intervals);
  append_integer(out, "N", c.lens_steps);
  out += "\n[postlens]\n";
  append_number(out, "length", c.post_length);
  append_integer(out, "steps", c.post_steps);
  out += "\n[output]\n";
  append_integer(out, "snapshot_stride", c.snapshot_stride);
  append_integer(out, "binary", c.binary_snapshots ? 1 : 0);
  return out;
}

SimulationSetup make_setup(const SimulationConfig& c, bool strict) {
  SimulationSetup s;
  try {
    s.optics = make_optical_parameters(c.wavelength, c.index_outside, c.index_lens);
    s.geometry = make_lens_geometry(c.sphere_radius, c.axial_extent, c.aperture);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  s.source.kind = c.source_kind;
  s.source.waist = c.waist;
  s.source.emitter_z = c.emitter_z;
  s.source.decay_length = c.decay_length;
  s.m_intervals = c.m_intervals;
  s.lens_steps = c.lens_steps;
  s.post_steps = c.post_steps;
  s.post_length = c.post_length;
  s.snapshot_stride = c.snapshot_stride;
  s.strict = strict;
  return s;
}

}
