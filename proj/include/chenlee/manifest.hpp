#pragma once

#include <string>
#include <vector>

#include "chenlee/errors.hpp"

namespace chenlee::cli {

/// Parsed command line. Flags only steer where configuration comes from
/// and where results go; every numerical knob lives in the key=value
/// config so each run's resolved settings can be embedded in its output.
struct RunManifest {
  std::string command;
  std::string config_path;            // empty: defaults only
  std::string output_dir;
  long seed = -1;                     // -1: take the config's seed
  bool force = false;
  bool help = false;
  std::vector<std::string> overrides; // key=value, applied after the config file
};

inline std::string usage_text() {
  return
      "usage: chenlee <command> [options]\n"
      "\n"
      "commands:\n"
      "  simulate          march an initial field with the exponential integrator\n"
      "  picard            run the fixed-point iteration and report contraction data\n"
      "  verify-estimates  sample-based checks of the a priori inequalities\n"
      "  inflation-scan    norm growth of the second iterate on two-mode data\n"
      "  oracle-check      closed-form self-test of the spectral building blocks\n"
      "\n"
      "options:\n"
      "  --config <path>   key=value configuration file\n"
      "  --set key=value   override one configuration entry (repeatable)\n"
      "  --output <dir>    output directory (must be empty unless --force)\n"
      "  --force           write into a non-empty output directory\n"
      "  --seed <n>        shorthand for --set seed=<n>\n"
      "  --s <value>       shorthand for --set s=<value>\n"
      "  --t <value>       shorthand for --set t=<value>\n"
      "  --N <a>..<b>      shorthand for --set N_min=<a> --set N_max=<b>\n"
      "  --help            print this message\n"
      "\n"
      "Flags also accept --flag=value. Run a command with --help for its\n"
      "configuration keys and defaults.\n";
}

inline RunManifest parse_manifest(const std::vector<std::string>& args) {
  RunManifest m;
  std::size_t i = 0;
  if (i < args.size() && !args[i].empty() && args[i][0] != '-') m.command = args[i++];
  for (; i < args.size(); ++i) {
    std::string flag = args[i];
    std::string inline_value;
    bool has_inline = false;
    if (flag.rfind("--", 0) == 0) {
      const auto eq = flag.find('=');
      if (eq != std::string::npos) {
        inline_value = flag.substr(eq + 1);
        flag = flag.substr(0, eq);
        has_inline = true;
      }
    }
    const auto value = [&]() -> std::string {
      if (has_inline) return inline_value;
      if (i + 1 >= args.size()) throw precondition_error("flag " + flag + " needs a value");
      return args[++i];
    };
    if (flag == "--help" || flag == "-h") {
      m.help = true;
    } else if (flag == "--config") {
      m.config_path = value();
    } else if (flag == "--set") {
      m.overrides.push_back(value());
    } else if (flag == "--output") {
      m.output_dir = value();
    } else if (flag == "--force") {
      m.force = true;
    } else if (flag == "--seed") {
      const std::string v = value();
      try {
        m.seed = std::stol(v);
      } catch (...) {
        throw precondition_error("flag --seed expects an integer, got '" + v + "'");
      }
      m.overrides.push_back("seed=" + v);
    } else if (flag == "--s") {
      m.overrides.push_back("s=" + value());
    } else if (flag == "--t") {
      m.overrides.push_back("t=" + value());
    } else if (flag == "--N") {
      const std::string r = value();
      const auto dots = r.find("..");
      if (dots == std::string::npos || dots == 0 || dots + 2 >= r.size())
        throw precondition_error("flag --N expects a range like 8..64, got '" + r + "'");
      m.overrides.push_back("N_min=" + r.substr(0, dots));
      m.overrides.push_back("N_max=" + r.substr(dots + 2));
    } else {
      throw precondition_error("unknown flag '" + flag + "'");
    }
  }
  if (!m.help && m.command.empty())
    throw precondition_error("no command given; try --help");
  return m;
}

}  // namespace chenlee::cli
