#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chenlee/errors.hpp"
#include "chenlee/fourier_field.hpp"
#include "chenlee/trajectory.hpp"

namespace chenlee::io {

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& tok, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE)
    throw io_error(where + ": cannot parse number '" + tok + "'");
  return v;
}

inline long parse_long(const std::string& tok, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE)
    throw io_error(where + ": cannot parse integer '" + tok + "'");
  return v;
}

// Field files: one line per mode, "k re im", ascending k, %.17g.
// Every mode in the band is written so the bandwidth survives a round trip.
// '#' lines carry metadata (the resolved run config) and are skipped on read.

inline void write_comment_block(std::ofstream& out, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out << "# " << line << '\n';
}

inline void write_field(const std::string& path, const FourierField& u,
                        const std::string& header = std::string()) {
  std::ofstream out(path);
  if (!out) throw io_error("write_field: cannot open '" + path + "'");
  if (!header.empty()) write_comment_block(out, header);
  for (int k = -u.max_mode(); k <= u.max_mode(); ++k) {
    const cdouble c = u.at(k);
    out << k << ' ' << fmt_g17(c.real()) << ' ' << fmt_g17(c.imag()) << '\n';
  }
  if (!out) throw io_error("write_field: write failed for '" + path + "'");
}

/// Modes absent from the file are zero. A field that is conjugate
/// symmetric to 1e-12 is treated as a real-valued function.
inline FourierField read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("read_field: cannot open '" + path + "'");
  std::vector<std::pair<int, cdouble>> rows;
  std::string line;
  int lineno = 0;
  bool have_prev = false;
  int prev_k = 0;
  int K = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string ks, res, ims;
    if (!(ls >> ks)) continue;  // blank line
    if (ks[0] == '#') continue;
    if (!(ls >> res >> ims))
      throw io_error("read_field: " + path + ":" + std::to_string(lineno) +
                     ": expected 'k re im'");
    std::string extra;
    if (ls >> extra)
      throw io_error("read_field: " + path + ":" + std::to_string(lineno) +
                     ": trailing token '" + extra + "'");
    const std::string where = path + ":" + std::to_string(lineno);
    const long kl = parse_long(ks, where);
    const int k = int(kl);
    if (have_prev && k <= prev_k)
      throw io_error("read_field: " + where + ": modes must be strictly ascending");
    have_prev = true;
    prev_k = k;
    rows.emplace_back(k, cdouble(parse_double(res, where), parse_double(ims, where)));
    K = std::max({K, k, -k});
  }
  FourierField u(K, true);
  u.mark_complex();
  for (const auto& [k, c] : rows) u.set(k, c);
  if (is_conjugate_symmetric(u, 1e-12)) {
    FourierField r(K, true);
    for (int k = -K; k <= K; ++k) r.set(k, u.at(k));
    return r;
  }
  return u;
}

// Trajectory directories: times.csv (index,t) next to t_<index>.field files.

inline void write_trajectory(const std::string& dir, const Trajectory& traj,
                             const std::string& header = std::string()) {
  traj.validate();
  std::filesystem::create_directories(dir);
  std::ofstream times(dir + "/times.csv");
  if (!times) throw io_error("write_trajectory: cannot open '" + dir + "/times.csv'");
  if (!header.empty()) write_comment_block(times, header);
  times << "index,t\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    times << i << ',' << fmt_g17(traj.times[i]) << '\n';
    write_field(dir + "/t_" + std::to_string(i) + ".field", traj.fields[i], header);
  }
  if (!times) throw io_error("write_trajectory: write failed in '" + dir + "'");
}

inline Trajectory read_trajectory(const std::string& dir) {
  std::ifstream times(dir + "/times.csv");
  if (!times) throw io_error("read_trajectory: cannot open '" + dir + "/times.csv'");
  Trajectory traj;
  std::string line;
  while (std::getline(times, line) && !line.empty() && line[0] == '#') {
  }
  if (line != "index,t")
    throw io_error("read_trajectory: " + dir + "/times.csv: expected header 'index,t'");
  int lineno = 1;
  while (std::getline(times, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    const std::string where = dir + "/times.csv:" + std::to_string(lineno);
    if (comma == std::string::npos) throw io_error("read_trajectory: " + where + ": expected 'index,t'");
    const long idx = parse_long(line.substr(0, comma), where);
    if (idx != long(traj.times.size()))
      throw io_error("read_trajectory: " + where + ": indices must count up from 0");
    traj.times.push_back(parse_double(line.substr(comma + 1), where));
    traj.fields.push_back(read_field(dir + "/t_" + std::to_string(idx) + ".field"));
  }
  traj.validate();
  return traj;
}

// Run configuration: flat key=value lines, '#' starts a comment.
// Values stay strings until a command resolves them against its schema;
// resolution is where unknown keys are rejected.

struct Config {
  std::map<std::string, std::string> kv;

  void set_pair(const std::string& spec, const std::string& where) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw io_error(where + ": expected key=value, got '" + spec + "'");
    std::string key = spec.substr(0, eq);
    std::string val = spec.substr(eq + 1);
    const auto trim = [](std::string& s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    trim(key);
    trim(val);
    if (key.empty()) throw io_error(where + ": empty key in '" + spec + "'");
    kv[key] = val;
  }
};

inline Config parse_config_text(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    const auto b = line.find_last_not_of(" \t\r");
    cfg.set_pair(line.substr(a, b - a + 1), origin + ":" + std::to_string(lineno));
  }
  return cfg;
}

inline Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

/// Fills defaults and type-checks every entry. Any key outside the
/// schema is rejected by name so typos surface instead of being ignored.
struct ResolvedConfig {
  std::map<std::string, std::string> values;

  const std::string& raw(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end())
      throw precondition_error("config: internal schema miss for key '" + key + "'");
    return it->second;
  }
  double get_double(const std::string& key) const {
    try {
      return parse_double(raw(key), "config key '" + key + "'");
    } catch (const io_error& e) {
      throw precondition_error(e.what());
    }
  }
  int get_int(const std::string& key) const {
    try {
      return int(parse_long(raw(key), "config key '" + key + "'"));
    } catch (const io_error& e) {
      throw precondition_error(e.what());
    }
  }
  bool get_bool(const std::string& key) const {
    const std::string& v = raw(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw precondition_error("config key '" + key + "': expected true/false, got '" + v + "'");
  }

  std::string render() const {
    std::string out;
    for (const auto& [k, v] : values) out += k + "=" + v + "\n";
    return out;
  }
};

inline ResolvedConfig resolve_config(const Config& cfg,
                                     const std::map<std::string, std::string>& defaults) {
  for (const auto& [k, v] : cfg.kv)
    if (!defaults.count(k))
      throw precondition_error("config: unknown key '" + k + "'");
  ResolvedConfig out;
  out.values = defaults;
  for (const auto& [k, v] : cfg.kv) out.values[k] = v;
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "'");
  out << text;
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace chenlee::io
