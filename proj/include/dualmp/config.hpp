#pragma once

// Experiment configuration: flat "section.key = value" text, written with
// sorted keys and 17 significant digits so that parse(write(c)) == c and
// identical configs hash identically.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualmp/field_io.hpp"
#include "dualmp/grid.hpp"
#include "dualmp/mpsolve.hpp"
#include "dualmp/nfunc.hpp"

namespace dualmp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed 17 significant digits, used for every real in output tables.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_real(const std::string& s, const std::string& key) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, x);
  if (ec != std::errc() || ptr != e) throw ConfigError("config: bad real for " + key + ": '" + s + "'");
  return x;
}

inline long long parse_int(const std::string& s, const std::string& key) {
  long long x = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, x);
  if (ec != std::errc() || ptr != e) throw ConfigError("config: bad integer for " + key + ": '" + s + "'");
  return x;
}

inline bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("config: bad boolean for " + key + ": '" + s + "'");
}

inline std::vector<double> parse_real_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t c = s.find(',', start);
    std::string item = s.substr(start, c == std::string::npos ? std::string::npos : c - start);
    const auto l = item.find_first_not_of(" \t");
    const auto r = item.find_last_not_of(" \t");
    item = l == std::string::npos ? "" : item.substr(l, r - l + 1);
    out.push_back(parse_real(item, key));
    if (c == std::string::npos) break;
    start = c + 1;
  }
  return out;
}

inline std::string format_real_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_real(v[i]);
  }
  return s;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct SweepGrid {
  std::vector<double> p, q, alpha, beta;
  /// Each point is explored at α = β and p = q when set.
  bool diagonal = false;
};

struct ExperimentConfig {
  SystemParams params;
  GridDomain domain = GridDomain::cube(3, 17);
  MPConfig mp;
  std::uint64_t seed = 20240607;
  std::string output_dir = "out";
  std::string suites = "all";
  SweepGrid sweep;
  int workers = 1;
  bool force = false;
  int grid_doubling = 0;

  void validate() const {
    params.validate();
    domain.validate();
    if (domain.dim != params.N) {
      throw std::invalid_argument("ExperimentConfig: domain.dim must equal params.N");
    }
    mp.validate(params);
    if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers must be >= 1");
    if (grid_doubling < 0 || grid_doubling > 4) {
      throw std::invalid_argument("ExperimentConfig: grid_doubling must be in [0, 4]");
    }
  }

  bool operator==(const ExperimentConfig& o) const;
};

namespace detail {

// One binding per key: how to render it and how to assign it.
struct Binding {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
};

template <class T>
Binding real_key(T ExperimentConfig::*outer, double T::*field) {
  return {[=](const ExperimentConfig& c) { return format_real(c.*outer.*field); },
          [=](ExperimentConfig& c, const std::string& v, const std::string& k) {
            c.*outer.*field = parse_real(v, k);
          }};
}

template <class T>
Binding int_key(T ExperimentConfig::*outer, int T::*field) {
  return {[=](const ExperimentConfig& c) { return std::to_string(c.*outer.*field); },
          [=](ExperimentConfig& c, const std::string& v, const std::string& k) {
            c.*outer.*field = static_cast<int>(parse_int(v, k));
          }};
}

template <class T>
Binding bool_key(T ExperimentConfig::*outer, bool T::*field) {
  return {[=](const ExperimentConfig& c) { return std::string(c.*outer.*field ? "true" : "false"); },
          [=](ExperimentConfig& c, const std::string& v, const std::string& k) {
            c.*outer.*field = parse_bool(v, k);
          }};
}

inline Binding descent_key(double DescentConfig::*field) {
  return {[=](const ExperimentConfig& c) { return format_real(c.mp.descent.*field); },
          [=](ExperimentConfig& c, const std::string& v, const std::string& k) {
            c.mp.descent.*field = parse_real(v, k);
          }};
}

inline Binding axis_n(int a) {
  return {[=](const ExperimentConfig& c) { return std::to_string(c.domain.n[a]); },
          [=](ExperimentConfig& c, const std::string& v, const std::string& k) {
            c.domain.n[a] = static_cast<int>(parse_int(v, k));
          }};
}

inline Binding axis_half(int a) {
  return {[=](const ExperimentConfig& c) { return format_real(c.domain.half_extent[a]); },
          [=](ExperimentConfig& c, const std::string& v, const std::string& k) {
            c.domain.half_extent[a] = parse_real(v, k);
          }};
}

inline Binding list_key(std::vector<double> SweepGrid::*field) {
  return {[=](const ExperimentConfig& c) { return format_real_list(c.sweep.*field); },
          [=](ExperimentConfig& c, const std::string& v, const std::string& k) {
            c.sweep.*field = parse_real_list(v, k);
          }};
}

inline const std::map<std::string, Binding>& bindings() {
  static const std::map<std::string, Binding> table = [] {
    using EC = ExperimentConfig;
    std::map<std::string, Binding> m;
    m["params.N"] = int_key(&EC::params, &SystemParams::N);
    m["params.p"] = real_key(&EC::params, &SystemParams::p);
    m["params.q"] = real_key(&EC::params, &SystemParams::q);
    m["params.alpha"] = real_key(&EC::params, &SystemParams::alpha);
    m["params.beta"] = real_key(&EC::params, &SystemParams::beta);
    m["domain.dim"] = int_key(&EC::domain, &GridDomain::dim);
    for (int a = 0; a < 3; ++a) {
      m["domain.n" + std::to_string(a)] = axis_n(a);
      m["domain.half" + std::to_string(a)] = axis_half(a);
    }
    m["mp.path_nodes"] = int_key(&EC::mp, &MPConfig::path_nodes);
    m["mp.s_exponent"] = real_key(&EC::mp, &MPConfig::s_exponent);
    m["mp.t_cap"] = real_key(&EC::mp, &MPConfig::t_cap);
    m["mp.descent.initial_step"] = descent_key(&DescentConfig::initial_step);
    m["mp.descent.backtracking"] = descent_key(&DescentConfig::backtracking);
    m["mp.descent.armijo"] = descent_key(&DescentConfig::armijo);
    m["mp.grad_tol"] = real_key(&EC::mp, &MPConfig::grad_tol);
    m["mp.max_iters"] = int_key(&EC::mp, &MPConfig::max_iters);
    m["mp.cg_tol"] = real_key(&EC::mp, &MPConfig::cg_tol);
    m["mp.neighbour_fraction"] = real_key(&EC::mp, &MPConfig::neighbour_fraction);
    m["mp.size_fraction"] = real_key(&EC::mp, &MPConfig::size_fraction);
    m["mp.refine_rounds"] = int_key(&EC::mp, &MPConfig::refine_rounds);
    m["mp.reparametrize"] = bool_key(&EC::mp, &MPConfig::reparametrize);
    m["mp.reparam_every"] = int_key(&EC::mp, &MPConfig::reparam_every);
    m["mp.stall_window"] = int_key(&EC::mp, &MPConfig::stall_window);
    m["mp.stall_decrease"] = real_key(&EC::mp, &MPConfig::stall_decrease);
    m["mp.newton_polish"] = bool_key(&EC::mp, &MPConfig::newton_polish);
    m["mp.polish_switch"] = real_key(&EC::mp, &MPConfig::polish_switch);
    m["mp.polish_cg_tol"] = real_key(&EC::mp, &MPConfig::polish_cg_tol);
    m["mp.gmres_restart"] = int_key(&EC::mp, &MPConfig::gmres_restart);
    m["mp.gmres_max_iters"] = int_key(&EC::mp, &MPConfig::gmres_max_iters);
    m["run.seed"] = {[](const EC& c) { return std::to_string(c.seed); },
                     [](EC& c, const std::string& v, const std::string& k) {
                       c.seed = static_cast<std::uint64_t>(parse_int(v, k));
                     }};
    m["run.output_dir"] = {[](const EC& c) { return c.output_dir; },
                           [](EC& c, const std::string& v, const std::string&) { c.output_dir = v; }};
    m["run.suites"] = {[](const EC& c) { return c.suites; },
                       [](EC& c, const std::string& v, const std::string&) { c.suites = v; }};
    m["run.workers"] = {[](const EC& c) { return std::to_string(c.workers); },
                        [](EC& c, const std::string& v, const std::string& k) {
                          c.workers = static_cast<int>(parse_int(v, k));
                        }};
    m["run.force"] = {[](const EC& c) { return std::string(c.force ? "true" : "false"); },
                      [](EC& c, const std::string& v, const std::string& k) { c.force = parse_bool(v, k); }};
    m["run.grid_doubling"] = {[](const EC& c) { return std::to_string(c.grid_doubling); },
                              [](EC& c, const std::string& v, const std::string& k) {
                                c.grid_doubling = static_cast<int>(parse_int(v, k));
                              }};
    m["sweep.p"] = list_key(&SweepGrid::p);
    m["sweep.q"] = list_key(&SweepGrid::q);
    m["sweep.alpha"] = list_key(&SweepGrid::alpha);
    m["sweep.beta"] = list_key(&SweepGrid::beta);
    m["sweep.diagonal"] = {[](const EC& c) { return std::string(c.sweep.diagonal ? "true" : "false"); },
                           [](EC& c, const std::string& v, const std::string& k) {
                             c.sweep.diagonal = parse_bool(v, k);
                           }};
    return m;
  }();
  return table;
}

inline std::string trim(const std::string& s) {
  const auto l = s.find_first_not_of(" \t\r");
  if (l == std::string::npos) return "";
  const auto r = s.find_last_not_of(" \t\r");
  return s.substr(l, r - l + 1);
}

}  // namespace detail

inline std::string write_config(const ExperimentConfig& c) {
  std::string out;
  for (const auto& [key, b] : detail::bindings()) out += key + " = " + b.get(c) + "\n";
  return out;
}

/// Unset keys keep their defaults; unknown keys and malformed lines throw.
inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    const auto& tab = detail::bindings();
    const auto it = tab.find(key);
    if (it == tab.end()) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key " + key);
    it->second.set(c, val, key);
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

/// Hash of the resolved config; the output directory does not enter it.
inline std::string config_hash(const ExperimentConfig& c) {
  ExperimentConfig k = c;
  k.output_dir.clear();
  return hex64(fnv1a(write_config(k)));
}

inline bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return write_config(*this) == write_config(o);
}

}  // namespace dualmp
