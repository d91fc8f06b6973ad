#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace msdehaze {

// Every pipeline tunable in one place. Defaults follow the method's
// recommended settings; min_radius, t_floor and detail_gain are artifact
// knobs documented next to their owners.
struct PipelineConfig {
  int rho_dark = 7;        // dark channel window radius
  int rho_wgif = 25;       // guided filter radius (60 reproduces the large-radius variant)
  double lambda = 0.001;   // guided filter ridge regularizer
  double bin_step = std::numbers::pi / 720.0;  // haze-line histogram bin, radians
  int nu = 200;            // haze-line subset cap
  double eta = 0.25;       // restoration transmission floor; 0.125 for heavy haze
  int levels = 1;          // pyramid depth L0, 1..3
  double min_radius = 0.02;  // near-airlight clustering bypass
  double t_floor = 0.1;    // single-scale baseline lower bound t_L
  std::vector<double> detail_gain{1.0};  // per-Laplacian-level multiplier
  int threads = 0;         // 0 = all cores

  bool operator==(const PipelineConfig&) const = default;
};

inline void validate(const PipelineConfig& cfg) {
  const auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (cfg.rho_dark < 0) fail("rho_dark must be >= 0");
  if (cfg.rho_wgif < 0) fail("rho_wgif must be >= 0");
  if (cfg.lambda < 0.0) fail("lambda must be >= 0");
  if (!(cfg.bin_step > 0.0)) fail("bin_step must be positive");
  const double bins = std::numbers::pi / cfg.bin_step;
  if (bins < 1.0 - 1e-9 || std::fabs(bins - std::round(bins)) > 1e-6)
    fail("bin_step must divide pi");
  if (cfg.nu < 1) fail("nu must be >= 1");
  if (!(cfg.eta > 0.0) || cfg.eta > 1.0) fail("eta must be in (0, 1]");
  if (cfg.levels < 1 || cfg.levels > 3) fail("levels must be in 1..3");
  if (cfg.min_radius < 0.0) fail("min_radius must be >= 0");
  if (!(cfg.t_floor > 0.0) || cfg.t_floor > 1.0) fail("t_floor must be in (0, 1]");
  if (cfg.detail_gain.empty()) fail("detail_gain must not be empty");
  for (double g : cfg.detail_gain)
    if (!(g > 0.0)) fail("detail_gain entries must be positive");
  if (cfg.threads < 0) fail("threads must be >= 0");
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);  // shortest round-trip
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::invalid_argument("config: bad number for " + key + ": '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s, const std::string& key) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw std::invalid_argument("config: bad integer for " + key + ": '" + s + "'");
  return static_cast<int>(v);
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline std::vector<double> parse_gain_list(const std::string& text) {
  std::vector<double> gains;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    gains.push_back(detail::parse_double(detail::trim(item), "detail_gain"));
  if (gains.empty())
    throw std::invalid_argument("config: detail_gain must not be empty");
  return gains;
}

inline std::string serialize_config(const PipelineConfig& cfg) {
  using detail::format_double;
  std::ostringstream out;
  out << "# dark channel window radius (method default 7)\n"
      << "rho_dark=" << cfg.rho_dark << "\n"
      << "# guided filter radius (method default 25; 60 for the large-radius variant)\n"
      << "rho_wgif=" << cfg.rho_wgif << "\n"
      << "# guided filter ridge regularizer (method default 1/1000)\n"
      << "lambda=" << format_double(cfg.lambda) << "\n"
      << "# haze-line histogram bin in radians (method default pi/720)\n"
      << "bin_step=" << format_double(cfg.bin_step) << "\n"
      << "# haze-line subset cap (method default 200)\n"
      << "nu=" << cfg.nu << "\n"
      << "# restoration transmission floor (1/4 normal haze, 1/8 heavy)\n"
      << "eta=" << format_double(cfg.eta) << "\n"
      << "# pyramid depth L0 (method default 1)\n"
      << "levels=" << cfg.levels << "\n"
      << "# near-airlight clustering bypass radius (implementation choice)\n"
      << "min_radius=" << format_double(cfg.min_radius) << "\n"
      << "# single-scale baseline lower bound t_L (implementation choice)\n"
      << "t_floor=" << format_double(cfg.t_floor) << "\n"
      << "# per-level Laplacian multipliers (implementation choice)\n"
      << "detail_gain=";
  for (std::size_t i = 0; i < cfg.detail_gain.size(); ++i)
    out << (i ? "," : "") << format_double(cfg.detail_gain[i]);
  out << "\n"
      << "# worker threads, 0 = all cores (implementation choice)\n"
      << "threads=" << cfg.threads << "\n";
  return out.str();
}

inline PipelineConfig parse_config_text(const std::string& text,
                                        PipelineConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got '" + stripped + "'");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key == "rho_dark") base.rho_dark = detail::parse_int(value, key);
    else if (key == "rho_wgif") base.rho_wgif = detail::parse_int(value, key);
    else if (key == "lambda") base.lambda = detail::parse_double(value, key);
    else if (key == "bin_step") base.bin_step = detail::parse_double(value, key);
    else if (key == "nu") base.nu = detail::parse_int(value, key);
    else if (key == "eta") base.eta = detail::parse_double(value, key);
    else if (key == "levels") base.levels = detail::parse_int(value, key);
    else if (key == "min_radius") base.min_radius = detail::parse_double(value, key);
    else if (key == "t_floor") base.t_floor = detail::parse_double(value, key);
    else if (key == "detail_gain") base.detail_gain = parse_gain_list(value);
    else if (key == "threads") base.threads = detail::parse_int(value, key);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return base;
}

inline PipelineConfig load_config_file(const std::string& path,
                                       PipelineConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

}  // namespace msdehaze
