// Command-line laboratory for the dissipative Benjamin-Ono-type model:
// exponential-integrator runs, Picard fixed-point solves, inequality
// verification campaigns, and the two-mode norm-inflation scan. All
// randomness is seeded through the config; identical config + seed gives
// bit-identical outputs. Every artifact embeds the resolved configuration.

#include <cctype>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "chenlee/duhamel.hpp"
#include "chenlee/errors.hpp"
#include "chenlee/estimates.hpp"
#include "chenlee/etd.hpp"
#include "chenlee/fourier_field.hpp"
#include "chenlee/illposed.hpp"
#include "chenlee/io.hpp"
#include "chenlee/manifest.hpp"
#include "chenlee/params.hpp"
#include "chenlee/random_field.hpp"
#include "chenlee/symbols.hpp"
#include "chenlee/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace chenlee;

namespace {

using Schema = std::map<std::string, std::string>;

io::ResolvedConfig resolve(const cli::RunManifest& m, const Schema& schema) {
  io::Config c;
  if (!m.config_path.empty()) c = io::parse_config_file(m.config_path);
  for (const auto& ov : m.overrides) c.set_pair(ov, "--set");
  return io::resolve_config(c, schema);
}

fs::path prepare_output(const cli::RunManifest& m) {
  if (m.output_dir.empty())
    throw precondition_error("command '" + m.command + "' requires --output <dir>");
  fs::path out(m.output_dir);
  if (fs::exists(out) && !fs::is_directory(out))
    throw precondition_error("output path '" + m.output_dir + "' is not a directory");
  if (fs::exists(out) && !fs::is_empty(out) && !m.force)
    throw precondition_error("output directory '" + m.output_dir +
                             "' is not empty (use --force to write anyway)");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw io_error("cannot create output directory '" + m.output_dir + "'");
  return out;
}

json config_json(const io::ResolvedConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.values) j[k] = v;
  return j;
}

void write_report(const fs::path& out, const json& j) {
  io::write_text((out / "report.json").string(), j.dump(2) + "\n");
}

void emit_config(const fs::path& out, const io::ResolvedConfig& cfg) {
  io::write_text((out / "resolved_config.cfg").string(), cfg.render());
}

std::vector<double> parse_double_list(const io::ResolvedConfig& cfg, const std::string& key) {
  std::vector<double> vals;
  std::string tok;
  const std::string& v = cfg.raw(key);
  for (std::size_t i = 0; i <= v.size(); ++i) {
    if (i == v.size() || v[i] == ',') {
      if (!tok.empty()) {
        try {
          vals.push_back(io::parse_double(tok, "config key '" + key + "'"));
        } catch (const io_error& e) {
          throw precondition_error(e.what());
        }
        tok.clear();
      }
    } else if (!std::isspace(static_cast<unsigned char>(v[i]))) {
      tok += v[i];
    }
  }
  if (vals.empty()) throw precondition_error("config key '" + key + "': empty list");
  return vals;
}

ModelParams model_params(const io::ResolvedConfig& cfg) {
  ModelParams p{cfg.get_double("beta"), cfg.get_double("eta")};
  p.validate();
  return p;
}

json field_summary(const FourierField& u, double s) {
  return json{{"max_mode", u.max_mode()},
              {"l2_norm", l2_norm(u)},
              {"hs_norm", sobolev_norm(u, s)}};
}

// Shared initial-data block for the marching commands. "zero" skips
// normalization (no scale fixes a zero norm); "file" loads a field and
// embeds it into the configured band.
FourierField build_initial(const io::ResolvedConfig& cfg) {
  const std::string kind = cfg.raw("initial");
  const int K = cfg.get_int("K");
  const double s = cfg.get_double("s");
  if (K < 1) throw precondition_error("config key 'K': must be >= 1");

  FourierField phi(K, true);
  if (kind == "zero") {
    return phi;
  } else if (kind == "random") {
    RandomFieldSpec spec;
    spec.K = K;
    spec.seed = std::uint64_t(cfg.get_int("seed"));
    const std::string pe = cfg.raw("profile_exponent");
    spec.profile_exponent =
        (pe == "auto") ? default_profile_exponent(s) : cfg.get_double("profile_exponent");
    phi = random_field(spec);
  } else if (kind == "file") {
    const std::string path = cfg.raw("initial_file");
    if (path.empty())
      throw precondition_error("initial=file needs config key 'initial_file'");
    const FourierField loaded = io::read_field(path);
    if (loaded.max_mode() > K)
      throw precondition_error("initial field has max_mode " +
                               std::to_string(loaded.max_mode()) +
                               " but the run is configured with K = " + std::to_string(K));
    if (!loaded.real_valued()) phi.mark_complex();
    for (int k = -loaded.max_mode(); k <= loaded.max_mode(); ++k) phi.set(k, loaded.at(k));
  } else {
    throw precondition_error("config key 'initial': expected zero|random|file, got '" +
                             kind + "'");
  }
  if (cfg.get_bool("normalize")) phi = normalize_to(phi, s, cfg.get_double("amplitude"));
  return phi;
}

Trajectory thin_snapshots(const Trajectory& traj, int stride) {
  Trajectory out;
  for (std::size_t i = 0; i < traj.size(); i += std::size_t(stride)) {
    out.times.push_back(traj.times[i]);
    out.fields.push_back(traj.fields[i]);
  }
  if (out.times.back() != traj.times.back()) {
    out.times.push_back(traj.times.back());
    out.fields.push_back(traj.fields.back());
  }
  return out;
}

const Schema kSimulateSchema = {
    {"beta", "1"},         {"eta", "1"},
    {"s", "1"},            {"K", "128"},
    {"T", "1"},            {"n_steps", "500"},
    {"seed", "1"},         {"initial", "random"},
    {"initial_file", ""},  {"profile_exponent", "auto"},
    {"normalize", "true"}, {"amplitude", "1"},
    {"include_nonlinearity", "true"},
    {"snapshot_stride", "0"},
};

int cmd_simulate(const cli::RunManifest& m) {
  const io::ResolvedConfig cfg = resolve(m, kSimulateSchema);
  const fs::path out = prepare_output(m);

  const FourierField phi = build_initial(cfg);
  duhamel::SolverConfig sc;
  sc.params = model_params(cfg);
  sc.s = cfg.get_double("s");
  sc.K = cfg.get_int("K");
  sc.T = cfg.get_double("T");
  sc.n_steps = cfg.get_int("n_steps");
  sc.include_nonlinearity = cfg.get_bool("include_nonlinearity");
  sc.validate(true);

  const Trajectory traj = duhamel::etd_march(phi, sc);

  int stride = cfg.get_int("snapshot_stride");
  if (stride < 0) throw precondition_error("config key 'snapshot_stride': must be >= 0");
  if (stride == 0) stride = std::max(1, sc.n_steps / 16);

  const std::string header = cfg.render();
  io::write_trajectory((out / "trajectory").string(), thin_snapshots(traj, stride), header);
  io::write_field((out / "final.field").string(), traj.fields.back(), header);

  {
    std::ofstream e((out / "energy.csv").string());
    if (!e) throw io_error("cannot open energy.csv");
    io::write_comment_block(e, header);
    e << "t,l2_norm,hs_norm,energy_rate\n";
    for (std::size_t i = 0; i < traj.size(); ++i)
      e << io::fmt_g17(traj.times[i]) << ',' << io::fmt_g17(l2_norm(traj.fields[i])) << ','
        << io::fmt_g17(sobolev_norm(traj.fields[i], sc.s)) << ','
        << io::fmt_g17(duhamel::energy_rate(traj.fields[i], sc.params)) << '\n';
  }

  json rep;
  rep["command"] = "simulate";
  rep["config"] = config_json(cfg);
  rep["seed"] = cfg.get_int("seed");
  rep["initial"] = field_summary(phi, sc.s);
  rep["final"] = field_summary(traj.fields.back(), sc.s);
  rep["n_nodes"] = traj.size();
  rep["l2_monotone"] = true;  // enforced stepwise by the march's dissipation guard
  rep["pass"] = true;
  write_report(out, rep);
  emit_config(out, cfg);
  return 0;
}

const Schema kPicardSchema = {
    {"beta", "1"},        {"eta", "1"},
    {"s", "0"},           {"K", "64"},
    {"T", "1"},           {"n_steps", "64"},
    {"seed", "1"},        {"initial", "random"},
    {"initial_file", ""}, {"profile_exponent", "auto"},
    {"normalize", "true"}, {"amplitude", "0.1"},
    {"picard_tol", "1e-10"}, {"picard_max_iter", "40"},
    {"quadrature_nodes_per_step", "4"}, {"first_step_grading", "0"},
    {"fitted_C", "1"},    {"auto_horizon", "true"},
    {"snapshot_stride", "0"},
};

int cmd_picard(const cli::RunManifest& m) {
  const io::ResolvedConfig cfg = resolve(m, kPicardSchema);
  const double s = cfg.get_double("s");
  duhamel::growth_exponent(s);  // rejects s <= -1/2 by name before any work
  const fs::path out = prepare_output(m);

  const FourierField phi = build_initial(cfg);
  duhamel::SolverConfig sc;
  sc.params = model_params(cfg);
  sc.s = s;
  sc.K = cfg.get_int("K");
  sc.T = cfg.get_double("T");
  sc.n_steps = cfg.get_int("n_steps");
  sc.picard_tol = cfg.get_double("picard_tol");
  sc.picard_max_iter = cfg.get_int("picard_max_iter");
  sc.quadrature_nodes_per_step = cfg.get_int("quadrature_nodes_per_step");
  sc.first_step_grading = cfg.get_int("first_step_grading");
  sc.fitted_C = cfg.get_double("fitted_C");
  if (cfg.get_bool("auto_horizon")) {
    const double Tstar = duhamel::existence_time(sobolev_norm(phi, s), s, sc.fitted_C);
    sc.T = std::min(sc.T, Tstar);
  }
  sc.validate();

  const duhamel::PicardResult res = duhamel::picard_solve(phi, sc);

  int stride = cfg.get_int("snapshot_stride");
  if (stride < 0) throw precondition_error("config key 'snapshot_stride': must be >= 0");
  if (stride == 0) stride = std::max(1, sc.n_steps / 16);

  const std::string header = cfg.render();
  io::write_trajectory((out / "solution").string(), thin_snapshots(res.solution, stride),
                       header);
  io::write_field((out / "final.field").string(), res.solution.fields.back(), header);

  json rep;
  rep["command"] = "picard";
  rep["config"] = config_json(cfg);
  rep["seed"] = cfg.get_int("seed");
  rep["initial"] = field_summary(phi, s);
  rep["horizon"] = sc.T;
  rep["gamma"] = res.report.gamma;
  rep["fitted_C"] = res.report.fitted_C;
  rep["iterate_norms"] = res.report.iterate_xts_norms;
  rep["successive_diffs"] = res.report.successive_diffs;
  rep["contraction_ratios"] = res.report.contraction_ratios;
  rep["converged"] = res.converged;
  rep["final"] = field_summary(res.solution.fields.back(), s);
  rep["pass"] = res.converged;
  if (!res.converged)
    rep["failure"] = "picard iteration did not converge within " +
                     std::to_string(sc.picard_max_iter) + " sweeps";
  write_report(out, rep);
  emit_config(out, cfg);
  return res.converged ? 0 : 3;
}

json estimate_json(const estimates::EstimateReport& r) {
  json j;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["fitted_constant"] = r.fitted_constant;
  if (r.has_exponent) {
    j["fitted_exponent"] = r.fitted_exponent;
    j["exponent_half_width"] = r.exponent_half_width;
  }
  j["n_rows"] = r.grid.size();
  return j;
}

const Schema kVerifySchema = {
    {"beta", "1"},
    {"eta", "1"},
    {"seed", "1"},
    {"K", "64"},
    {"checks", "linear,bilinear,product,kernel"},
    {"n_samples", "24"},
    {"linear_s_values", "-0.4,-0.25,1"},
    {"linear_T_values", "0.25,1"},
    {"bilinear_s_values", "-0.25,0,1"},
    {"bilinear_j_lo", "2"},
    {"bilinear_j_hi", "6"},
    {"bilinear_samples", "12"},
    {"product_a_values", "1,2"},
    {"product_r_values", "0,1,2.5"},
    {"product_samples", "200"},
    {"product_bound_constant_scale", "1"},
    {"kernel_lambdas", "0.25,0.5,1"},
    {"kernel_etas", "0.5,1,2"},
    {"kernel_ts", "0.125,0.25,0.5,1"},
};

int cmd_verify_estimates(const cli::RunManifest& m) {
  const io::ResolvedConfig cfg = resolve(m, kVerifySchema);
  const fs::path out = prepare_output(m);
  const ModelParams p = model_params(cfg);

  RandomFieldSpec base;
  base.K = cfg.get_int("K");
  base.seed = std::uint64_t(cfg.get_int("seed"));

  const std::string checks = "," + cfg.raw("checks") + ",";
  const auto enabled = [&](const char* name) {
    return checks.find("," + std::string(name) + ",") != std::string::npos;
  };

  std::vector<estimates::EstimateReport> reports;
  if (enabled("linear"))
    reports.push_back(estimates::verify_linear_estimates(
        parse_double_list(cfg, "linear_s_values"), parse_double_list(cfg, "linear_T_values"),
        p, base, cfg.get_int("n_samples")));
  if (enabled("bilinear"))
    reports.push_back(estimates::verify_bilinear_estimate(
        parse_double_list(cfg, "bilinear_s_values"), cfg.get_int("bilinear_j_lo"),
        cfg.get_int("bilinear_j_hi"), base, p, cfg.get_int("bilinear_samples")));
  if (enabled("product")) {
    const double scale = cfg.get_double("product_bound_constant_scale");
    for (double a : parse_double_list(cfg, "product_a_values"))
      for (double r : parse_double_list(cfg, "product_r_values")) {
        auto rep = estimates::verify_product_bound(a, r, cfg.get_int("product_samples"),
                                                   base, scale);
        rep.name += estimates::detail::label(" a=%g r=%g", a, r);
        reports.push_back(std::move(rep));
      }
  }
  if (enabled("kernel"))
    reports.push_back(estimates::verify_kernel_lemmas(
        parse_double_list(cfg, "kernel_lambdas"), parse_double_list(cfg, "kernel_etas"),
        parse_double_list(cfg, "kernel_ts")));
  if (reports.empty())
    throw precondition_error("config key 'checks': nothing selected");

  {
    std::ofstream csv((out / "estimates.csv").string());
    if (!csv) throw io_error("cannot open estimates.csv");
    io::write_comment_block(csv, cfg.render());
    csv << "campaign,case,lhs,rhs\n";
    for (const auto& r : reports)
      for (std::size_t i = 0; i < r.grid.size(); ++i)
        csv << r.name << ',' << r.grid[i] << ',' << io::fmt_g17(r.lhs[i]) << ','
            << io::fmt_g17(r.rhs[i]) << '\n';
  }

  bool all_pass = true;
  json rep;
  rep["command"] = "verify-estimates";
  rep["config"] = config_json(cfg);
  rep["seed"] = cfg.get_int("seed");
  rep["campaigns"] = json::array();
  json failures = json::array();
  for (const auto& r : reports) {
    rep["campaigns"].push_back(estimate_json(r));
    if (!r.pass) failures.push_back(r.name);
    all_pass = all_pass && r.pass;
  }
  rep["failures"] = failures;
  rep["pass"] = all_pass;
  write_report(out, rep);
  emit_config(out, cfg);
  return all_pass ? 0 : 3;
}

const Schema kInflationSchema = {
    {"beta", "1"}, {"eta", "1"}, {"s", "-1.5"},
    {"t", "1"},    {"N_min", "16"}, {"N_max", "1024"},
};

int cmd_inflation_scan(const cli::RunManifest& m) {
  const io::ResolvedConfig cfg = resolve(m, kInflationSchema);
  const fs::path out = prepare_output(m);
  const ModelParams p = model_params(cfg);

  const int N_min = cfg.get_int("N_min");
  const int N_max = cfg.get_int("N_max");
  if (N_min < 2) throw precondition_error("config key 'N_min': must be >= 2");
  std::vector<int> Ns;
  for (int N = N_min; N <= N_max; N *= 2) Ns.push_back(N);

  const illposed::InflationReport rep =
      illposed::inflation_scan(cfg.get_double("s"), p, cfg.get_double("t"), Ns);

  {
    std::ofstream csv((out / "scan.csv").string());
    if (!csv) throw io_error("cannot open scan.csv");
    io::write_comment_block(csv, cfg.render());
    csv << "N,hs_norm,mode1_re,mode1_im,mode1_fraction\n";
    for (std::size_t i = 0; i < rep.Ns.size(); ++i)
      csv << rep.Ns[i] << ',' << io::fmt_g17(rep.second_iterate_norms[i]) << ','
          << io::fmt_g17(rep.mode1[i].real()) << ',' << io::fmt_g17(rep.mode1[i].imag())
          << ',' << io::fmt_g17(rep.mode1_fractions[i]) << '\n';
  }

  json j;
  j["command"] = "inflation-scan";
  j["config"] = config_json(cfg);
  j["s"] = rep.s;
  j["t"] = rep.t;
  j["N"] = rep.Ns;
  j["hs_norms"] = rep.second_iterate_norms;
  j["mode1_fractions"] = rep.mode1_fractions;
  j["fitted_slope"] = rep.fitted_slope;
  j["slope_half_width"] = rep.slope_half_width;
  j["expected_slope"] = rep.expected_slope;
  j["pass"] = rep.pass;
  if (!rep.pass)
    j["failure"] = rep.s < -0.5
                       ? "fitted slope disagrees with the predicted inflation rate"
                       : "norms are not uniformly bounded in N";
  write_report(out, j);
  emit_config(out, cfg);
  return rep.pass ? 0 : 3;
}

const Schema kOracleSchema = {
    {"beta", "1"}, {"eta", "1"}, {"s", "-1"},
    {"N", "4"},    {"t", "0.5"}, {"tol", "1e-8"},
};

int cmd_oracle_check(const cli::RunManifest& m) {
  const io::ResolvedConfig cfg = resolve(m, kOracleSchema);
  const ModelParams p = model_params(cfg);
  const int N = cfg.get_int("N");
  const double s = cfg.get_double("s");
  const double t = cfg.get_double("t");
  const double tol = cfg.get_double("tol");
  if (!(tol > 0.0)) throw precondition_error("config key 'tol': must be > 0");

  const auto refined = illposed::refined_second_iterate(N, s, p, t, tol / 10.0);
  const FourierField closed = illposed::second_iterate_full(N, s, p, t, 2 * N);
  const double err = max_abs_diff(refined.value, closed);
  const cdouble m1_closed = illposed::second_iterate_mode1(N, s, p, t);
  const double m1_err = std::abs(closed.at(1) - m1_closed);
  const bool pass = refined.stable && err <= tol && m1_err <= tol;

  std::printf("oracle-check: N=%d s=%g t=%g quadrature_steps=%d\n", N, s, t,
              refined.n_steps);
  std::printf("  closed form vs quadrature: max_abs_err = %.3e (tol %.1e)\n", err, tol);
  std::printf("  single-mode formula vs full assembly: %.3e\n", m1_err);
  std::printf("%s\n", pass ? "PASS" : "FAIL");

  if (!m.output_dir.empty()) {
    const fs::path out = prepare_output(m);
    json j;
    j["command"] = "oracle-check";
    j["config"] = config_json(cfg);
    j["quadrature_steps"] = refined.n_steps;
    j["quadrature_stable"] = refined.stable;
    j["max_abs_err"] = err;
    j["mode1_err"] = m1_err;
    j["pass"] = pass;
    write_report(out, j);
    emit_config(out, cfg);
  }
  return pass ? 0 : 3;
}

void print_schema(const std::string& command, const Schema& schema) {
  std::printf("configuration keys for '%s' (key=default):\n", command.c_str());
  for (const auto& [k, v] : schema)
    std::printf("  %s=%s\n", k.c_str(), v.empty() ? "<empty>" : v.c_str());
}

int dispatch(const cli::RunManifest& m) {
  if (m.help) {
    if (m.command.empty()) {
      std::fputs(cli::usage_text().c_str(), stdout);
    } else if (m.command == "simulate") {
      print_schema(m.command, kSimulateSchema);
    } else if (m.command == "picard") {
      print_schema(m.command, kPicardSchema);
    } else if (m.command == "verify-estimates") {
      print_schema(m.command, kVerifySchema);
    } else if (m.command == "inflation-scan") {
      print_schema(m.command, kInflationSchema);
    } else if (m.command == "oracle-check") {
      print_schema(m.command, kOracleSchema);
    } else {
      throw precondition_error("unknown command '" + m.command + "'");
    }
    return 0;
  }
  if (m.command == "simulate") return cmd_simulate(m);
  if (m.command == "picard") return cmd_picard(m);
  if (m.command == "verify-estimates") return cmd_verify_estimates(m);
  if (m.command == "inflation-scan") return cmd_inflation_scan(m);
  if (m.command == "oracle-check") return cmd_oracle_check(m);
  throw precondition_error("unknown command '" + m.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return dispatch(cli::parse_manifest(args));
  } catch (const precondition_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const io_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
