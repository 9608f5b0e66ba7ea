#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "robincap/campaign.hpp"
#include "robincap/config.hpp"
#include "robincap/csv.hpp"
#include "robincap/hfunction.hpp"

// Exit codes: 0 ok, 2 config parse error, 3 mesh failure, 4 non-convergence.

namespace {

using namespace robincap;

constexpr int kExitConfig = 2;
constexpr int kExitMesh = 3;
constexpr int kExitSolve = 4;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) return;
  auto out = open_out(path);
  out << content;
}

int cmd_regimes(int n, double p, double beta, const std::string& out_path) {
  const ProblemParams params(n, p, beta);
  const RegimeReport report = regime_classify(params);

  std::cout << "n = " << n << ", p = " << p << ", beta = " << beta << "\n"
            << "regime:            " << regime_name(report.regime) << "\n"
            << "alpha:             " << csv_number(report.alpha) << "\n"
            << "beta1:             " << csv_number(report.beta1) << "\n"
            << "beta2:             " << csv_number(report.beta2) << "\n"
            << "E(B1,B1):          " << csv_number(ball_energy(params, 1.0))
            << "\n"
            << "limit at infinity: " << csv_number(report.limit_at_infinity)
            << "\n";
  if (report.critical_radius)
    std::cout << "critical radius:   " << csv_number(*report.critical_radius)
              << "\n";
  if (report.regime == Regime::MinAtOne)
    std::cout << "minimum of R -> E(B1,B_R) at R = 1: the optimal pair is "
                 "(B1,B1) for every admissible volume bound\n";

  std::ostringstream csv;
  csv << "n,p,beta,regime,alpha,beta1,beta2,critical_radius,"
         "limit_at_infinity,min_at_one\n";
  csv << n << ',' << csv_number(p) << ',' << csv_number(beta) << ','
      << regime_name(report.regime) << ',' << csv_number(report.alpha) << ','
      << csv_number(report.beta1) << ',' << csv_number(report.beta2) << ','
      << (report.critical_radius ? csv_number(*report.critical_radius) : "")
      << ',' << csv_number(report.limit_at_infinity) << ','
      << (report.regime == Regime::MinAtOne ? 1 : 0) << "\n";
  csv << "# status: ok\n";
  emit(out_path, csv.str());
  return 0;
}

int cmd_curve(int n, double p, const std::vector<double>& betas, double r_min,
              double r_max, int samples, const std::string& out_path) {
  std::ostringstream csv;
  csv << "beta,r,energy\n";
  for (double beta : betas) {
    const ProblemParams params(n, p, beta);
    const BallEnergyCurve curve = ball_energy_curve(params, r_min, r_max, samples);
    for (size_t i = 0; i < curve.radii.size(); ++i)
      csv << csv_number(beta) << ',' << csv_number(curve.radii[i]) << ','
          << csv_number(curve.energies[i]) << "\n";
  }
  csv << "# status: ok\n";
  if (out_path.empty())
    std::cout << csv.str();
  else
    emit(out_path, csv.str());
  return 0;
}

struct SolveSetup {
  ProblemConfig config;
  std::optional<FemSolution> solution;  // absent for K = Omega
  double energy = 0.0;
};

SolveSetup solve_from_config(const std::string& config_path, int mesh_theta,
                             int mesh_radial) {
  SolveSetup setup;
  setup.config = parse_config_file(config_path);
  const ProblemParams params = setup.config.params();
  if (params.n != 2)
    throw ConfigError("the FEM path requires n = 2 (set [params] n = 2)");

  if (!setup.config.Omega) {
    setup.energy = params.beta * perimeter(setup.config.K);
    return setup;
  }
  const ShapePair pair = validate_pair(setup.config.K, *setup.config.Omega);
  const AnnularMesh mesh = build_annular_mesh(pair, mesh_theta, mesh_radial);
  setup.solution = solve(mesh, params);
  setup.energy = setup.solution->energy_total;
  return setup;
}

int cmd_solve(const std::string& config_path, int mesh_theta, int mesh_radial,
              const std::string& out_path) {
  const SolveSetup setup = solve_from_config(config_path, mesh_theta, mesh_radial);
  const ProblemParams params = setup.config.params();

  if (!setup.solution) {
    std::cout << "K = Omega: energy = beta * perimeter = "
              << csv_number(setup.energy) << "\n";
    emit(out_path, "x,y,u\n# status: ok\n");
    return 0;
  }

  const FemSolution& sol = *setup.solution;
  const RobinIdentity identity = robin_identity_check(sol, params);
  std::cout << "mesh:            " << sol.mesh.n_theta << " x "
            << sol.mesh.n_radial << " (" << sol.mesh.nodes.size() << " nodes, "
            << sol.mesh.triangles.size() << " triangles)\n"
            << "energy total:    " << csv_number(sol.energy_total) << "\n"
            << "  gradient part: " << csv_number(sol.energy_gradient_part) << "\n"
            << "  boundary part: " << csv_number(sol.energy_boundary_part) << "\n"
            << "robin identity:  lhs " << csv_number(identity.lhs) << "  rhs "
            << csv_number(identity.rhs) << "  gap "
            << csv_number(std::abs(identity.lhs - identity.rhs)) << "\n"
            << "iterations:      " << sol.iterations
            << "  final |grad| = " << csv_number(sol.final_gradient_norm) << "\n"
            << "converged:       " << (sol.converged ? "yes" : "no") << "\n";

  if (!out_path.empty()) {
    std::ostringstream csv;
    csv << "x,y,u\n";
    for (size_t i = 0; i < sol.values.size(); ++i)
      csv << csv_number(sol.mesh.nodes[i].x) << ','
          << csv_number(sol.mesh.nodes[i].y) << ','
          << csv_number(sol.values[i]) << "\n";
    csv << "# status: ok\n";
    emit(out_path, csv.str());
  }
  if (!sol.converged) return kExitSolve;
  return 0;
}

int cmd_verify(int n, double p, double beta, double M, int count,
               std::uint64_t seed, double amplitude, int mesh_theta,
               int mesh_radial, const std::string& out_path) {
  CampaignOptions options{ProblemParams(n, p, beta), M, count, seed,
                          amplitude, mesh_theta, mesh_radial};
  if (n != 2) throw ConfigError("verify runs the n = 2 FEM path only");

  const CampaignReport report = run_campaign(options);
  if (!report.hypothesis_met)
    std::cerr << "warning: beta^{1/(p-1)} <= (n-p)/(p-1); the concentric-ball "
                 "energy is not guaranteed minimal in this range, campaign "
                 "runs as exploration\n";

  std::ostringstream csv;
  write_campaign_csv(csv, report);
  if (out_path.empty())
    std::cout << csv.str();
  else
    emit(out_path, csv.str());

  std::cout << "instances: " << report.records.size()
            << "  ball bound: " << csv_number(report.ball_bound)
            << "  min margin: " << csv_number(report.min_margin)
            << "  violations: " << report.violations
            << "  failures: " << report.failures << "\n";
  return report.failures == 0 ? 0 : kExitSolve;
}

int cmd_hscan(const std::string& config_path, const std::string& phi_mode,
              int mesh_theta, int mesh_radial, const std::string& out_path) {
  const SolveSetup setup = solve_from_config(config_path, mesh_theta, mesh_radial);
  if (!setup.solution)
    throw ConfigError("hscan needs a proper pair K != Omega");
  const ProblemParams params = setup.config.params();
  const FemSolution& sol = *setup.solution;

  PhiField phi;
  if (phi_mode == "solution_ratio") {
    phi = solution_ratio_phi(sol);
  } else if (phi_mode.rfind("constant:", 0) == 0) {
    phi = constant_phi(sol, std::stod(phi_mode.substr(9)));
  } else if (phi_mode == "derearranged") {
    const double area_omega = sol.mesh.core_area() + sol.mesh.total_area();
    const double wn = unit_ball_volume(params.n);
    const double M =
        setup.config.M.value_or(std::max(area_omega, wn * 1.0000001));
    const double r_ref = ball_lower_bound(params, M).r_opt;
    if (r_ref <= 1.0)
      throw ConfigError(
          "derearranged scan needs a reference radius > 1 (increase M)");
    const DerearrangedPhi der = derearranged_phi(sol, params, r_ref);
    if (der.clamped > 0)
      std::cerr << "warning: " << der.clamped
                << " triangles clamped to the reference range [1, R]\n";
    phi = der.phi;
  } else {
    throw CLI::ValidationError(
        "--phi must be solution_ratio, constant:<c>, or derearranged");
  }

  const double lo_trace = [&] {
    double lo = 1.0;
    for (const auto& [a, b] : sol.mesh.outer_edges)
      lo = std::min({lo, sol.values[a], sol.values[b]});
    return lo;
  }();

  std::ostringstream csv;
  csv << "t,H,internal,area_term,external\n";
  double h_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    const double t = lo_trace + (1.0 - lo_trace) * (k + 0.5) / 200;
    const HEvaluation eval = h_function(sol, t, phi, params);
    h_min = std::min(h_min, eval.h_value);
    csv << csv_number(eval.t) << ',' << csv_number(eval.h_value) << ','
        << csv_number(eval.internal_part) << ',' << csv_number(eval.area_part)
        << ',' << csv_number(eval.external_part) << "\n";
  }
  csv << "# status: ok\n";
  if (out_path.empty())
    std::cout << csv.str();
  else
    emit(out_path, csv.str());

  std::cout << "energy: " << csv_number(sol.energy_total)
            << "  min H over scan: " << csv_number(h_min) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Robin p-capacity energies: exact concentric-ball formulas and a "
      "star-shaped FEM verification harness"};
  app.require_subcommand(1);

  int n = 2;
  double p = 2.0, beta = 1.0;
  double M = 4.0 * M_PI;
  double r_min = 1.0, r_max = 6.0, amplitude = 0.15;
  int samples = 200, count = 10, mesh_theta = 256, mesh_radial = 32;
  std::uint64_t seed = 1;
  std::vector<double> betas;
  std::string config_path, out_path, phi_mode = "solution_ratio";

  auto* regimes = app.add_subcommand("regimes", "classify R -> E(B1,B_R)");
  regimes->add_option("--n", n);
  regimes->add_option("--p", p);
  regimes->add_option("--beta", beta);
  regimes->add_option("--out", out_path);

  auto* curve = app.add_subcommand("curve", "sample the ball energy curve");
  curve->add_option("--n", n);
  curve->add_option("--p", p);
  curve->add_option("--beta", betas)->required();
  curve->add_option("--r-min", r_min);
  curve->add_option("--r-max", r_max);
  curve->add_option("--samples", samples);
  curve->add_option("--out", out_path);

  auto* solve_cmd = app.add_subcommand("solve", "FEM solve of a config instance");
  solve_cmd->add_option("--config", config_path)->required();
  solve_cmd->add_option("--mesh-theta", mesh_theta);
  solve_cmd->add_option("--mesh-radial", mesh_radial);
  solve_cmd->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "seeded concentric-ball campaign");
  verify->add_option("--n", n);
  verify->add_option("--p", p);
  verify->add_option("--beta", beta);
  verify->add_option("--M", M);
  verify->add_option("--count", count);
  verify->add_option("--seed", seed);
  verify->add_option("--amplitude", amplitude);
  verify->add_option("--mesh-theta", mesh_theta);
  verify->add_option("--mesh-radial", mesh_radial);
  verify->add_option("--out", out_path);

  auto* hscan = app.add_subcommand("hscan", "H(t, phi) scan on a solved instance");
  hscan->add_option("--config", config_path)->required();
  hscan->add_option("--phi", phi_mode,
                    "solution_ratio | constant:<c> | derearranged");
  hscan->add_option("--mesh-theta", mesh_theta);
  hscan->add_option("--mesh-radial", mesh_radial);
  hscan->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (regimes->parsed()) return cmd_regimes(n, p, beta, out_path);
    if (curve->parsed())
      return cmd_curve(n, p, betas, r_min, r_max, samples, out_path);
    if (solve_cmd->parsed())
      return cmd_solve(config_path, mesh_theta, mesh_radial, out_path);
    if (verify->parsed())
      return cmd_verify(n, p, beta, M, count, seed, amplitude, mesh_theta,
                        mesh_radial, out_path);
    if (hscan->parsed())
      return cmd_hscan(config_path, phi_mode, mesh_theta, mesh_radial, out_path);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const MeshError& err) {
    std::cerr << "mesh error: " << err.what() << "\n";
    return kExitMesh;
  } catch (const ContainmentViolation& err) {
    std::cerr << "mesh error: " << err.what() << "\n";
    return kExitMesh;
  } catch (const NotStarShapedAboutCenter& err) {
    std::cerr << "mesh error: " << err.what() << "\n";
    return kExitMesh;
  } catch (const InvalidShape& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
