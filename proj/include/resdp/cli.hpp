#pragma once

// Command-line front end. run() parses argv, writes results to `out` and
// diagnostics to `err`, and returns the process exit code:
//   0 success, 1 verification failure, 2 usage error, 3 domain or
//   convergence error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "resdp/resdp.hpp"

namespace resdp::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kDomain = 3 };

/// Default seed: RESDP_SEED when set, else 42.
inline std::uint64_t default_seed() {
  const char* env = std::getenv("RESDP_SEED");
  if (!env || !*env) return 42;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw Error(ErrorKind::BadParams, "RESDP_SEED must be an unsigned integer");
  return v;
}

namespace detail {

struct Common {
  int n = 1;
  int m = 1;
  std::string sign = "plus";
  std::uint64_t seed = 42;
  double tol = 0.0;
  std::size_t samples = 0;
  std::string json;

  Resonance resonance() const { return Resonance(n, m, resdp::detail::parse_sign(sign)); }
};

inline void add_common(CLI::App* app, Common& c) {
  app->add_option("--n", c.n, "First resonance order")->check(CLI::Range(1, 64));
  app->add_option("--m", c.m, "Second resonance order")->check(CLI::Range(1, 64));
  app->add_option("--sign", c.sign, "Form sign")->check(CLI::IsMember({"plus", "minus"}));
  app->add_option("--seed", c.seed, "RNG seed (default RESDP_SEED or 42)");
  app->add_option("--tol", c.tol, "Tolerance override")->check(CLI::NonNegativeNumber);
  app->add_option("--samples", c.samples, "Sample count override");
  app->add_option("--json", c.json, "Write a JSON report to this path");
}

template <int N>
Eigen::Matrix<double, N, 1> parse_vector(const std::string& text, const char* what) {
  Eigen::Matrix<double, N, 1> v;
  std::stringstream ss(text);
  std::string cell;
  int k = 0;
  while (std::getline(ss, cell, ',')) {
    if (k == N) break;
    try {
      std::size_t used = 0;
      v[k] = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadParams, std::string(what) + ": cannot parse '" + cell + "'");
    }
    ++k;
  }
  if (k != N || std::getline(ss, cell))
    throw Error(ErrorKind::BadParams, std::string(what) + " needs " + std::to_string(N) + " comma-separated numbers");
  return v;
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text(path, text);
}

inline std::string vec_json(const Vec3& v) {
  return "[" + format_g17(v[0]) + ", " + format_g17(v[1]) + ", " + format_g17(v[2]) + "]";
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Resonance dual pairs: Casimirs, Kummer shapes, flows and verification"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  detail::Common common;
  try {
    common.seed = default_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  // casimir
  auto* cas = app.add_subcommand("casimir", "Evaluate the Casimir and its gradient at a point");
  detail::add_common(cas, common);
  std::string point;
  cas->add_option("--point", point, "x,y,z")->required();

  // curve
  auto* curve = app.add_subcommand("curve", "Generating curve of a Kummer shape as CSV");
  detail::add_common(curve, common);
  double c = 1.0, delta = 1e-6, z_max = 0.0;
  std::string out_path;
  curve->add_option("--c", c, "Leaf parameter")->required();
  curve->add_option("--delta", delta, "Pole margin relative to c");
  curve->add_option("--z-max", z_max, "Truncation height of unbounded sheets (default 3c)");
  curve->add_option("--out", out_path, "Output CSV path (default stdout)");

  // mesh
  auto* mesh = app.add_subcommand("mesh", "Surface of revolution as OBJ or CSV");
  detail::add_common(mesh, common);
  std::size_t slices = 64, rings = 32;
  std::string format;
  mesh->add_option("--c", c, "Leaf parameter")->required();
  mesh->add_option("--slices", slices, "Angular steps");
  mesh->add_option("--rings", rings, "Rings per sheet");
  mesh->add_option("--delta", delta, "Pole margin relative to c");
  mesh->add_option("--z-max", z_max, "Truncation height of unbounded sheets (default 3c)");
  mesh->add_option("--format", format, "obj or csv (default from the --out extension, else obj)")
      ->check(CLI::IsMember({"obj", "csv"}));
  mesh->add_option("--out", out_path, "Output path (default stdout)");

  // flow
  auto* flow = app.add_subcommand("flow", "Integrate a Hamiltonian flow and print the trajectory as CSV");
  detail::add_common(flow, common);
  std::string level;
  double dt = 1e-3, T = 1.0, leaf_c = 1.0, casimir_weight = 0.0;
  std::string coeffs = "0,0,1", start;
  flow->add_option("level", level, "upstairs or downstairs")->required()->check(CLI::IsMember({"upstairs", "downstairs"}));
  flow->add_option("--dt", dt, "Step size");
  flow->add_option("--T", T, "Final time");
  flow->add_option("--hamiltonian", coeffs, "alpha,beta,gamma in H = alpha X + beta Y + gamma Z + k C^2/2");
  flow->add_option("--casimir-weight", casimir_weight, "k in the C^2 term");
  flow->add_option("--start", start, "Initial state: x1,y1,x2,y2 (upstairs) or x,y,z (downstairs)");
  flow->add_option("--c", leaf_c, "Fiber R = c used to draw a start when --start is absent");
  flow->add_option("--out", out_path, "Output CSV path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a numerical check and report");
  detail::add_common(verify, common);
  std::string check;
  std::vector<std::string> names{"all"};
  for (const auto& info : kChecks) names.emplace_back(info.name);
  verify->add_option("check", check, "Check name or 'all'")->required()->check(CLI::IsMember(names));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    for (auto* sub : app.get_subcommands()) out << sub->help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const Resonance res = common.resonance();

    if (cas->parsed()) {
      const Vec3 p = detail::parse_vector<3>(point, "--point");
      const CasimirEval e = solve_casimir(res, p);
      out << "value " << format_g17(e.value) << "\n";
      out << "gradient " << format_g17(e.gradient[0]) << " " << format_g17(e.gradient[1]) << " "
          << format_g17(e.gradient[2]) << "\n";
      if (!common.json.empty())
        write_text(common.json, "{\n  \"n\": " + std::to_string(res.n) + ",\n  \"m\": " + std::to_string(res.m) +
                                    ",\n  \"sign\": \"" + std::string(to_string(res.sign)) + "\",\n  \"point\": " +
                                    detail::vec_json(p) + ",\n  \"value\": " + format_g17(e.value) +
                                    ",\n  \"gradient\": " + detail::vec_json(e.gradient) + "\n}\n");
      return kOk;
    }

    if (curve->parsed()) {
      const std::size_t samples = common.samples ? common.samples : 200;
      detail::emit(to_csv(generating_curve(res, c, samples, {delta, z_max})), out_path, out);
      return kOk;
    }

    if (mesh->parsed()) {
      const auto sheets = surface_mesh(res, c, slices, rings, {delta, z_max});
      if (format.empty()) format = out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv" ? "csv" : "obj";
      const TriangleMesh merged = merge_meshes(sheets);
      detail::emit(format == "csv" ? to_csv(merged) : to_obj(merged), out_path, out);
      err << sheets.size() << (sheets.size() == 1 ? " sheet, " : " sheets, ") << merged.vertices.size()
          << " vertices, " << merged.faces.size() << " faces\n";
      return kOk;
    }

    if (flow->parsed()) {
      const Vec3 abc = detail::parse_vector<3>(coeffs, "--hamiltonian");
      DownstairsHamiltonian h;
      h.alpha = abc[0];
      h.beta = abc[1];
      h.gamma = abc[2];
      if (casimir_weight != 0.0) {
        h.casimir_term = [k = casimir_weight](double x) { return 0.5 * k * x * x; };
        h.casimir_term_derivative = [k = casimir_weight](double x) { return k * x; };
      }
      const bool up = level == "upstairs";
      PhasePoint a0;
      if (start.empty())
        a0 = fiber_sample(res, leaf_c, 1, common.seed).front();
      else if (up)
        a0 = PhasePoint(detail::parse_vector<4>(start, "--start"));
      if (up) {
        const auto traj = flow_upstairs(res.sign, h.pullback(res), a0, dt, T);
        detail::emit(trajectory_csv(traj, {"x1", "y1", "x2", "y2"}), out_path, out);
      } else {
        const Vec3 p0 = start.empty() ? map_Pi(res, a0) : detail::parse_vector<3>(start, "--start");
        const auto traj = flow_downstairs(res, h, p0, dt, T);
        detail::emit(trajectory_csv(traj, {"x", "y", "z"}), out_path, out);
      }
      return kOk;
    }

    if (verify->parsed()) {
      const VerifyOptions opt{common.samples, common.seed, common.tol};
      std::vector<VerificationReport> reports;
      if (check == "all") {
        reports = run_all(opt);
      } else {
        reports.push_back(run_check(check, res, opt));
      }
      const std::string stamp = utc_timestamp();
      bool all_pass = true;
      for (auto& r : reports) {
        r.timestamp = stamp;
        all_pass = all_pass && r.pass;
        out << (r.pass ? "PASS " : "FAIL ") << r.check << " " << r.n << ":" << (r.sign == FormSign::plus ? "" : "-")
            << r.m << " max_defect=" << format_g17(r.max_defect) << " tol=" << format_g17(r.tolerance) << "\n";
        if (!r.pass)
          for (const auto& d : r.details)
            if (!d.pass) err << "  " << r.check << ": " << d.label << " = " << format_g17(d.max_defect) << "\n";
      }
      if (!common.json.empty())
        write_text(common.json, check == "all" ? to_json(reports, common.seed, stamp) : to_json(reports.front()));
      return all_pass ? kOk : kVerifyFailed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::BadParams || e.kind() == ErrorKind::IoError ? kUsage : kDomain;
  }
  return kUsage;
}

}  // namespace resdp::cli
