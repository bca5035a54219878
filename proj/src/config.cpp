#include "wnl/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wnl {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("[" + section + "] " + key + ": not a number: '" + v + "'");
  }
}

long parse_long(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("[" + section + "] " + key + ": not an integer: '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("[" + section + "] " + key + ": not an unsigned integer: '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& section, const std::string& key,
                               const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_double(section, key, trim(cell)));
  if (out.empty()) throw ConfigError("[" + section + "] " + key + ": empty list");
  return out;
}

/// Walks one section, consuming known keys and rejecting leftovers.
class SectionReader {
public:
  SectionReader(const RawConfig& raw, std::string name) : name_(std::move(name)) {
    auto it = raw.find(name_);
    if (it != raw.end()) entries_ = it->second;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return entries_.count(key) > 0;
  }
  std::string str(const std::string& key, const std::string& dflt) {
    seen_.insert(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? dflt : it->second;
  }
  double num(const std::string& key, double dflt) {
    seen_.insert(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? dflt : parse_double(name_, key, it->second);
  }
  long integer(const std::string& key, long dflt) {
    seen_.insert(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? dflt : parse_long(name_, key, it->second);
  }
  std::uint64_t u64(const std::string& key, std::uint64_t dflt) {
    seen_.insert(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? dflt : parse_u64(name_, key, it->second);
  }
  std::vector<double> list(const std::string& key, std::vector<double> dflt) {
    seen_.insert(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? dflt : parse_list(name_, key, it->second);
  }

  void finished() const {
    for (const auto& [key, value] : entries_)
      if (!seen_.count(key)) throw ConfigError("[" + name_ + "] unknown key: " + key);
  }

private:
  std::string name_;
  std::map<std::string, std::string> entries_;
  std::set<std::string> seen_;
};

}  // namespace

RawConfig parse_config_text(const std::string& text, const std::string& origin) {
  RawConfig raw;
  std::string section;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      raw[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (raw[section].count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
    raw[section][key] = value;
  }
  return raw;
}

RawConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str(), path);
}

AlphaOfS HarmonicsParams::profile() const {
  if (alpha_kind == AlphaKind::constant) {
    const double v = alpha_value;
    return [v](double) { return v; };
  }
  const double a = alpha_value, c = alpha_center, w = alpha_width;
  return [a, c, w](double s) {
    const double r = (s - c) / w;
    return a * std::exp(-r * r);
  };
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  cfg.phantom = AlphaDescriptor{};
  cfg.phantom_extent = 1.0;

  cfg.packet.h = 0.005;
  cfg.packet.envelope = Envelope{1.0, 0.14};
  cfg.packet.center_offset = -1.1;
  cfg.packet.kind = WavePacket::FieldKind::complex_probe;

  cfg.solver.grid = Grid2D(2, 2, -1.0, 1.0, -1.85, 1.65);  // placeholder, finalize() rebuilds
  cfg.solver.cfl = 0.5;
  cfg.solver.t_final = 2.0;
  cfg.solver.snapshot_times = {2.0};
  cfg.solver.boundary = Boundary::periodic_x;

  cfg.plan.angles_deg.clear();
  for (int i = 0; i < 60; ++i) cfg.plan.angles_deg.push_back(3.0 * i);

  cfg.finalize();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_raw(const RawConfig& raw) {
  static const std::set<std::string> known_sections = {"phantom", "packet", "solver",
                                                       "acquisition", "harmonics"};
  for (const auto& [name, _] : raw)
    if (!known_sections.count(name)) throw ConfigError("unknown section [" + name + "]");

  ExperimentConfig cfg = defaults();

  {
    SectionReader s(raw, "phantom");
    const std::string kind = s.str("kind", "gaussian");
    if (kind == "gaussian")
      cfg.phantom.kind = AlphaDescriptor::Kind::gaussian;
    else if (kind == "shepp_logan")
      cfg.phantom.kind = AlphaDescriptor::Kind::shepp_logan;
    else if (kind == "from_file")
      cfg.phantom.kind = AlphaDescriptor::Kind::from_file;
    else
      throw ConfigError("[phantom] kind must be gaussian, shepp_logan or from_file");
    cfg.phantom.ax = s.num("ax", cfg.phantom.ax);
    cfg.phantom.ay = s.num("ay", cfg.phantom.ay);
    cfg.phantom.amplitude = s.num("amplitude", cfg.phantom.amplitude);
    cfg.phantom.blur_sigma = s.num("blur_sigma", cfg.phantom.blur_sigma);
    cfg.phantom.path = s.str("path", cfg.phantom.path);
    cfg.phantom_extent = s.num("extent", cfg.phantom_extent);
    s.finished();
  }
  {
    SectionReader s(raw, "packet");
    cfg.packet.h = s.num("h", cfg.packet.h);
    cfg.packet.envelope.K = s.num("amplitude", cfg.packet.envelope.K);
    cfg.packet.envelope.w = s.num("width", cfg.packet.envelope.w);
    cfg.packet.center_offset = s.num("center_offset", cfg.packet.center_offset);
    cfg.packet.omega_x = s.num("omega_x", cfg.packet.omega_x);
    cfg.packet.omega_y = s.num("omega_y", cfg.packet.omega_y);
    const std::string kind = s.str("kind", "complex");
    if (kind == "complex")
      cfg.packet.kind = WavePacket::FieldKind::complex_probe;
    else if (kind == "real")
      cfg.packet.kind = WavePacket::FieldKind::real_probe;
    else
      throw ConfigError("[packet] kind must be complex or real");
    s.finished();
  }
  {
    SectionReader s(raw, "solver");
    const double xmin = s.num("xmin", cfg.solver.grid.xmin);
    const double xmax = s.num("xmax", cfg.solver.grid.xmax);
    const double ymin = s.num("ymin", cfg.solver.grid.ymin);
    const double ymax = s.num("ymax", cfg.solver.grid.ymax);
    cfg.solver.grid = Grid2D(2, 2, xmin, xmax, ymin, ymax);  // nx, ny rebuilt in finalize()
    cfg.dx_target = s.num("dx", 0.0);
    cfg.solver.cfl = s.num("cfl", cfg.solver.cfl);
    cfg.solver.t_final = s.num("t_final", cfg.solver.t_final);
    cfg.solver.snapshot_times = s.list("snapshot_times", cfg.solver.snapshot_times);
    const std::string b = s.str("boundary", "periodic_x");
    if (b == "periodic_x")
      cfg.solver.boundary = Boundary::periodic_x;
    else if (b == "dirichlet_zero")
      cfg.solver.boundary = Boundary::dirichlet_zero;
    else
      throw ConfigError("[solver] boundary must be periodic_x or dirichlet_zero");
    cfg.solver.noise_level = s.num("noise_level", cfg.solver.noise_level);
    cfg.solver.seed = s.u64("seed", cfg.solver.seed);
    cfg.solver.threads = static_cast<int>(s.integer("threads", cfg.solver.threads));
    s.finished();
  }
  {
    SectionReader s(raw, "acquisition");
    const double start = s.num("angle_start", 0.0);
    const double step = s.num("angle_step", 3.0);
    const long count = s.integer("angle_count", 60);
    if (count < 1) throw ConfigError("[acquisition] angle_count must be >= 1");
    if (s.has("angles")) {
      cfg.plan.angles_deg = s.list("angles", {});
    } else {
      cfg.plan.angles_deg.clear();
      for (long i = 0; i < count; ++i) cfg.plan.angles_deg.push_back(start + step * i);
    }
    cfg.plan.offset_min = s.num("offset_min", cfg.plan.offset_min);
    cfg.plan.offset_max = s.num("offset_max", cfg.plan.offset_max);
    cfg.plan.jobs = static_cast<int>(s.integer("jobs", cfg.plan.jobs));
    const std::string f = s.str("filter", "ram_lak_hann");
    if (f == "ram_lak")
      cfg.filter = FbpFilter::ram_lak;
    else if (f == "ram_lak_hann")
      cfg.filter = FbpFilter::ram_lak_hann;
    else
      throw ConfigError("[acquisition] filter must be ram_lak or ram_lak_hann");
    cfg.out_n = static_cast<int>(s.integer("out_n", cfg.out_n));
    cfg.out_extent = s.num("out_extent", cfg.out_extent);
    if (cfg.out_n < 2) throw ConfigError("[acquisition] out_n must be >= 2");
    if (cfg.out_extent <= 0.0) throw ConfigError("[acquisition] out_extent must be > 0");
    s.finished();
  }
  {
    SectionReader s(raw, "harmonics");
    cfg.harmonics.A = s.num("A", cfg.harmonics.A);
    cfg.harmonics.kmax = static_cast<int>(s.integer("kmax", cfg.harmonics.kmax));
    cfg.harmonics.ds = s.num("ds", cfg.harmonics.ds);
    cfg.harmonics.s_max = s.num("s_max", cfg.harmonics.s_max);
    const std::string k = s.str("alpha_kind", "const");
    if (k == "const")
      cfg.harmonics.alpha_kind = HarmonicsParams::AlphaKind::constant;
    else if (k == "gaussian")
      cfg.harmonics.alpha_kind = HarmonicsParams::AlphaKind::gaussian;
    else
      throw ConfigError("[harmonics] alpha_kind must be const or gaussian");
    cfg.harmonics.alpha_value = s.num("alpha_value", cfg.harmonics.alpha_value);
    cfg.harmonics.alpha_center = s.num("alpha_center", cfg.harmonics.alpha_center);
    cfg.harmonics.alpha_width = s.num("alpha_width", cfg.harmonics.alpha_width);
    if (cfg.harmonics.A < 0.0) throw ConfigError("[harmonics] A must be >= 0");
    if (cfg.harmonics.kmax < 1 || cfg.harmonics.kmax % 2 == 0)
      throw ConfigError("[harmonics] kmax must be odd and >= 1");
    if (cfg.harmonics.ds <= 0.0 || cfg.harmonics.s_max <= 0.0)
      throw ConfigError("[harmonics] ds and s_max must be > 0");
    if (cfg.harmonics.alpha_width <= 0.0) throw ConfigError("[harmonics] alpha_width must be > 0");
    s.finished();
  }

  cfg.finalize();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_raw(parse_config_file(path));
}

void ExperimentConfig::finalize() {
  phantom.validate();
  packet.validate();
  if (phantom_extent <= 0.0) throw ConfigError("[phantom] extent must be > 0");

  // Resolution rule: at least 4 nodes per reduced wavelength h.
  double dx = dx_target > 0.0 ? dx_target : packet.h / 4.0;
  if (dx > packet.h / 4.0 + 1e-12)
    throw ConfigError("[solver] dx violates the resolution rule dx <= h/4 (dx = " +
                      std::to_string(dx) + ", h = " + std::to_string(packet.h) + ")");

  auto cells = [&](double len) {
    const double q = len / dx;
    const long r = std::lround(q);
    return (std::abs(q - static_cast<double>(r)) < 1e-9 * q) ? std::max(1L, r)
                                                             : static_cast<long>(std::ceil(q));
  };
  const Grid2D& g = solver.grid;
  solver.grid = Grid2D(static_cast<int>(cells(g.xmax - g.xmin)) + 1,
                       static_cast<int>(cells(g.ymax - g.ymin)) + 1, g.xmin, g.xmax, g.ymin,
                       g.ymax);
  solver.validate();
  if (plan.offset_min >= plan.offset_max)
    throw ConfigError("[acquisition] offset window must satisfy offset_min < offset_max");
  if (plan.jobs < 1) throw ConfigError("[acquisition] jobs must be >= 1");
}

Grid2D ExperimentConfig::phantom_grid() const {
  const double dx = solver.grid.dx();
  const long n = std::lround(2.0 * phantom_extent / dx);
  return Grid2D(static_cast<int>(n) + 1, static_cast<int>(n) + 1, -phantom_extent, phantom_extent,
                -phantom_extent, phantom_extent);
}

}  // namespace wnl
