#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "frobenius/conditional.hpp"
#include "frobenius/errors.hpp"
#include "frobenius/exact.hpp"
#include "frobenius/models.hpp"
#include "frobenius/oracle.hpp"
#include "frobenius/rational.hpp"

#ifndef FROBENIUS_VERSION
#define FROBENIUS_VERSION "0.0.0"
#endif

namespace frobenius::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kOutDirEnv = "FROBENIUS_OUT_DIR";

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects the artifacts of one command and writes each one atomically.
class Output {
 public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& contents) {
    const fs::path target = dir_ / name;
    const fs::path staging = dir_ / (name + ".tmp");
    {
      std::ofstream out(staging, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + staging.string());
      out << contents;
    }
    fs::rename(staging, target);
    artifacts_.push_back(name);
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void manifest(const std::string& command, const std::map<std::string, std::string>& parameters,
                const std::vector<std::string>& argv) {
    const std::string name = command + ".manifest.json";
    json j = {{"command", command},
              {"parameters", parameters},
              {"argv", argv},
              {"artifacts", artifacts_},
              {"tool_version", FROBENIUS_VERSION},
              {"timestamp", utc_timestamp()}};
    const fs::path target = dir_ / name;
    const fs::path staging = dir_ / (name + ".tmp");
    {
      std::ofstream out(staging, std::ios::binary | std::ios::trunc);
      out << j.dump(2) << "\n";
    }
    fs::rename(staging, target);
  }

 private:
  fs::path dir_;
  std::vector<std::string> artifacts_;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_number(const std::string& text) { return parse_rational(text).get_d(); }

struct Settings {
  std::string out_dir;
  std::vector<std::string> argv;  // command tokens without --out-dir

  [[nodiscard]] fs::path directory() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return ".";
  }
};

// ---- exact ---------------------------------------------------------------

struct ExactArgs {
  std::string gamma;
  int nu_max = 3;
  double rho_max = 8.0;
  int samples = 401;
};

int cmd_exact(const ExactArgs& args, const Settings& settings) {
  if (args.nu_max < 0) throw ArgumentError("--nu-max must be non-negative");
  if (args.samples < 2 || !(args.rho_max > 0.0)) throw ArgumentError("--samples >= 2 and --rho-max > 0 required");
  const Rational gamma_q = parse_rational(args.gamma);
  const double gamma = gamma_q.get_d();

  Output out(settings.directory());
  std::string eigen_csv = "nu,W\n";
  std::string coeff_csv = "nu,j,c_j,c_j_exact\n";
  std::printf("%4s  %s\n", "nu", "W");
  for (int nu = 0; nu <= args.nu_max; ++nu) {
    const auto state = exact_state(nu, gamma);
    eigen_csv += std::to_string(nu) + "," + fmt(state.W) + "\n";
    std::printf("%4d  %s\n", nu, short_fmt(state.W).c_str());
    const auto exact = exact_coefficients(nu, gamma_q);
    for (std::size_t j = 0; j < exact.size(); ++j) {
      coeff_csv += std::to_string(nu) + "," + std::to_string(j) + "," + fmt(exact[j].get_d()) + "," +
                   to_string(exact[j]) + "\n";
    }
    std::string samples = "rho,F\n";
    for (int k = 0; k < args.samples; ++k) {
      const double rho = args.rho_max * k / (args.samples - 1);
      samples += fmt(rho) + "," + fmt(state.solution.value(rho)) + "\n";
    }
    out.write("exact_state_" + std::to_string(nu) + ".csv", samples);
  }
  out.write("exact_eigenvalues.csv", eigen_csv);
  out.write("exact_coefficients.csv", coeff_csv);
  out.manifest("exact",
               {{"gamma", args.gamma},
                {"nu_max", std::to_string(args.nu_max)},
                {"rho_max", fmt(args.rho_max)},
                {"samples", std::to_string(args.samples)}},
               settings.argv);
  return kSuccess;
}

// ---- conditional ---------------------------------------------------------

struct ConditionalArgs {
  int n = 0;
  std::string gamma;
  std::string b;
  double rho_max = 10.0;
  int node_samples = 2001;
};

int cmd_conditional(const ConditionalArgs& args, const Settings& settings) {
  if (args.n < 0) throw ArgumentError("--n must be non-negative");
  const Rational gamma_q = parse_rational(args.gamma), b_q = parse_rational(args.b);
  const double gamma = gamma_q.get_d(), b = b_q.get_d();

  const auto poly = coefficient_polynomial(args.n, gamma_q, b_q);
  const auto cert = admissible_a_certified(args.n, gamma, b);
  const auto family = conditional_family(args.n, gamma, b);

  std::vector<double> node_grid(static_cast<std::size_t>(args.node_samples));
  for (int k = 0; k < args.node_samples; ++k) node_grid[k] = args.rho_max * (k + 1) / args.node_samples;
  const auto residual_grid = log_grid();

  std::string csv = "i,a,W,nodes,residual";
  for (int j = 0; j <= args.n; ++j) csv += ",c_" + std::to_string(j);
  csv += "\n";
  json members = json::array();
  std::printf("W^(%d) = %s\n%4s  %-24s %6s  %s\n", args.n, short_fmt(family.W).c_str(), "i", "a", "nodes",
              "residual");
  for (std::size_t i = 0; i < family.roots.size(); ++i) {
    const auto& sol = family.solutions[i];
    const int nodes = count_nodes(sample(sol, node_grid));
    const double residual = ode_residual(sol, family.problem(i), residual_grid);
    csv += std::to_string(i + 1) + "," + fmt(family.roots[i]) + "," + fmt(family.W) + "," + std::to_string(nodes) +
           "," + fmt(residual);
    for (double c : sol.coeffs) csv += "," + fmt(c);
    csv += "\n";
    members.push_back({{"i", i + 1}, {"a", family.roots[i]}, {"nodes", nodes}, {"residual", residual},
                       {"coefficients", sol.coeffs}});
    std::printf("%4zu  %-24s %6d  %.3e\n", i + 1, fmt(family.roots[i]).c_str(), nodes, residual);
  }
  std::vector<std::string> poly_text;
  for (const auto& c : poly.poly) poly_text.push_back(to_string(c));
  for (const auto& w : family.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  Output out(settings.directory());
  out.write("conditional.csv", csv);
  out.write_json("conditional.json", {{"n", args.n},
                                      {"gamma", gamma},
                                      {"b", b},
                                      {"s", exponent(gamma)},
                                      {"W", family.W},
                                      {"second_condition_polynomial", poly_text},
                                      {"roots", family.roots},
                                      {"max_relative_imag", cert.max_relative_imag},
                                      {"max_polished_residual", cert.max_polished_residual},
                                      {"members", members},
                                      {"warnings", family.warnings}});
  out.manifest("conditional",
               {{"n", std::to_string(args.n)},
                {"gamma", args.gamma},
                {"b", args.b},
                {"rho_max", fmt(args.rho_max)},
                {"node_samples", std::to_string(args.node_samples)}},
               settings.argv);
  return kSuccess;
}

// ---- oracle --------------------------------------------------------------

struct OracleArgs {
  std::string gamma, a = "0", b = "0";
  int states = 4;
  double rho_max = 0.0;
  int points = 0;  // 0 keeps the default spacing rule
  bool hft = false;
  int nu = 0;
  double delta = 1e-3;
  bool write_states = false;
};

json hft_json(const HftReport& r) {
  return {{"problem", {{"gamma", r.problem.gamma}, {"a", r.problem.a}, {"b", r.problem.b}}},
          {"nu", r.nu},
          {"delta", r.delta},
          {"dW_da_fd", r.dW_da_fd},
          {"expect_inv_rho", r.expect_inv_rho},
          {"dW_db_fd", r.dW_db_fd},
          {"expect_rho", r.expect_rho},
          {"max_rel_error", r.max_rel_error},
          {"valid", r.valid},
          {"note", r.note}};
}

int cmd_oracle(const OracleArgs& args, const Settings& settings) {
  const RadialProblem problem{parse_number(args.gamma), parse_number(args.a), parse_number(args.b)};
  OracleConfig config = default_oracle_config(problem, args.states);
  if (args.rho_max > 0.0) config.rho_max = args.rho_max;
  if (args.points > 0) config.num_points = args.points;
  const auto est = solve_spectrum(problem, config);

  std::string csv = "nu,W,W_fine,W_coarse,accuracy,nodes,expect_inv_rho,expect_rho\n";
  std::printf("%4s  %-24s %-10s %5s\n", "nu", "W", "accuracy", "nodes");
  Output out(settings.directory());
  for (std::size_t k = 0; k < est.eigenvalues.size(); ++k) {
    const double inv = expectation(est.states[k], Weight::inv_rho);
    const double mean = expectation(est.states[k], Weight::rho);
    csv += std::to_string(k) + "," + fmt(est.eigenvalues[k]) + "," + fmt(est.fine_eigenvalues[k]) + "," +
           fmt(est.coarse_eigenvalues[k]) + "," + fmt(est.accuracy[k]) + "," + std::to_string(est.node_counts[k]) +
           "," + fmt(inv) + "," + fmt(mean) + "\n";
    std::printf("%4zu  %-24s %-10.2e %5d\n", k, fmt(est.eigenvalues[k]).c_str(), est.accuracy[k], est.node_counts[k]);
    if (args.write_states) {
      std::string samples = "rho,F\n";
      const auto& st = est.states[k];
      for (std::size_t i = 0; i < st.size(); ++i) samples += fmt(st.nodes()[i]) + "," + fmt(st.values()[i]) + "\n";
      out.write("oracle_state_" + std::to_string(k) + ".csv", samples);
    }
  }
  for (const auto& w : est.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  out.write("spectrum.csv", csv);

  std::map<std::string, std::string> parameters{{"gamma", args.gamma},
                                                {"a", args.a},
                                                {"b", args.b},
                                                {"states", std::to_string(args.states)},
                                                {"rho_max", fmt(config.rho_max)},
                                                {"points", std::to_string(config.num_points)}};
  if (args.hft) {
    const auto report = hft_check(problem, args.nu, args.delta, config);
    std::printf("HFT nu=%d  dW/da=%s  <1/rho>=%s  dW/db=%s  <rho>=%s  max_rel_error=%.3e%s\n", report.nu,
                short_fmt(report.dW_da_fd).c_str(), short_fmt(report.expect_inv_rho).c_str(),
                short_fmt(report.dW_db_fd).c_str(), short_fmt(report.expect_rho).c_str(), report.max_rel_error,
                report.valid ? "" : "  (INVALID)");
    out.write_json("hft.json", hft_json(report));
    parameters["hft"] = "true";
    parameters["nu"] = std::to_string(args.nu);
    parameters["delta"] = fmt(args.delta);
  }
  out.manifest("oracle", parameters, settings.argv);
  return kSuccess;
}

// ---- refute --------------------------------------------------------------

int cmd_refute(const std::string& model_path, const Settings& settings) {
  std::ifstream in(model_path);
  if (!in) throw ArgumentError("cannot open model file " + model_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ArgumentError("model file is not valid JSON: " + std::string(e.what()));
  }
  const Model model = j.get<Model>();
  const auto report = refute(model);

  std::printf("model %s (n_r = %d)\n", report.model.c_str(), report.n_r);
  std::printf("  claimed energy %s -> W = %s; nearest oracle W_%d = %s; gap %s\n",
              short_fmt(report.mustafa_value).c_str(), short_fmt(report.claimed_W).c_str(), report.nearest_index,
              short_fmt(report.oracle_nearest_eigenvalue).c_str(), short_fmt(report.gap).c_str());
  for (const auto& [name, value] : report.mustafa_partials) {
    std::printf("  d/d%-4s claimed %-14s oracle %s\n", name.c_str(), short_fmt(value).c_str(),
                short_fmt(report.oracle_partials.at(name)).c_str());
  }
  for (const auto& [name, value] : report.verdicts) std::printf("  %-28s %s\n", name.c_str(), value ? "true" : "false");

  Output out(settings.directory());
  out.write_json("refutation.json", report);
  out.manifest("refute", {{"model", fs::path(model_path).filename().string()}, {"model_record", j.dump()}},
               settings.argv);
  return kSuccess;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::string gamma;
  int n_min = 0;
  int n_max = 1;
  std::string b_grid;
};

int cmd_sweep(const SweepArgs& args, const Settings& settings) {
  const auto items = split_list(args.b_grid);
  if (items.empty()) throw CLI::ValidationError("--b-grid", "must list at least one value");
  if (args.n_min < 0 || args.n_max < args.n_min) throw CLI::ValidationError("--n-min/--n-max", "need 0 <= n-min <= n-max");
  const double gamma = parse_number(args.gamma);
  std::vector<double> grid;
  for (const auto& item : items) grid.push_back(parse_number(item));

  std::string csv = "n,b,i,a,W\n";
  for (int n = args.n_min; n <= args.n_max; ++n) {
    for (double b : grid) {
      const auto roots = admissible_a(n, gamma, b);
      const double W = termination_energy(n, gamma, b);
      for (std::size_t i = 0; i < roots.size(); ++i) {
        csv += std::to_string(n) + "," + fmt(b) + "," + std::to_string(i + 1) + "," + fmt(roots[i]) + "," + fmt(W) +
               "\n";
      }
    }
  }
  std::printf("%zu rows for n = %d..%d over %zu b values\n",
              static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n') - 1), args.n_min, args.n_max,
              grid.size());
  Output out(settings.directory());
  out.write("sweep.csv", csv);
  out.manifest("sweep",
               {{"gamma", args.gamma},
                {"n_min", std::to_string(args.n_min)},
                {"n_max", std::to_string(args.n_max)},
                {"b_grid", args.b_grid}},
               settings.argv);
  return kSuccess;
}

std::vector<std::string> strip_out_dir(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out-dir") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out-dir=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Frobenius-method analysis of the radial equation "
               "F'' + [W + (1/4 - gamma^2)/rho^2 - rho^2 - a/rho - b rho] F = 0"};
  app.set_version_flag("--version", FROBENIUS_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Settings settings;
  settings.argv = strip_out_dir(args);
  app.add_option("--out-dir", settings.out_dir,
                 std::string("Directory for output files (default: $") + kOutDirEnv + " or the working directory)");

  ExactArgs exact_args;
  auto* exact = app.add_subcommand("exact", "Exact spectrum and eigenfunctions for a = b = 0");
  exact->add_option("--gamma", exact_args.gamma, "gamma (decimal or p/q)")->required();
  exact->add_option("--nu-max", exact_args.nu_max, "Largest radial index")->capture_default_str();
  exact->add_option("--rho-max", exact_args.rho_max, "Sampling range for eigenfunction files")->capture_default_str();
  exact->add_option("--samples", exact_args.samples, "Samples per eigenfunction file")->capture_default_str();

  ConditionalArgs cond_args;
  auto* conditional = app.add_subcommand("conditional", "Polynomial solutions of degree n: W^(n) and roots a^(n,i)(b)");
  conditional->add_option("--n", cond_args.n, "Polynomial degree")->required();
  conditional->add_option("--gamma", cond_args.gamma, "gamma (decimal or p/q)")->required();
  conditional->add_option("--b", cond_args.b, "Linear coupling b (decimal or p/q)")->required();
  conditional->add_option("--rho-max", cond_args.rho_max, "Range used for node counting")->capture_default_str();
  conditional->add_option("--node-samples", cond_args.node_samples, "Samples used for node counting")
      ->capture_default_str();

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Finite-difference spectrum and Hellmann-Feynman check");
  oracle->add_option("--gamma", oracle_args.gamma, "gamma")->required();
  oracle->add_option("--a", oracle_args.a, "Coulomb coupling a")->capture_default_str();
  oracle->add_option("--b", oracle_args.b, "Linear coupling b")->capture_default_str();
  oracle->add_option("--states", oracle_args.states, "Number of eigenvalues")->capture_default_str();
  oracle->add_option("--rho-max", oracle_args.rho_max, "Domain truncation (default 12 + |b| + max(a, 0)/2)");
  oracle->add_option("--points", oracle_args.points, "Fine-grid cells, coarse grid uses half (default keeps spacing <= 12/4000)");
  oracle->add_flag("--hft", oracle_args.hft, "Also write a Hellmann-Feynman report");
  oracle->add_option("--nu", oracle_args.nu, "State index for --hft")->capture_default_str();
  oracle->add_option("--delta", oracle_args.delta, "Finite-difference step for --hft")->capture_default_str();
  oracle->add_flag("--write-states", oracle_args.write_states, "Write sampled eigenfunctions");

  std::string model_path;
  auto* refute_cmd = app.add_subcommand("refute", "Test a model's claimed closed-form spectrum");
  refute_cmd->add_option("model", model_path, "Model record (JSON)")->required()->check(CLI::ExistingFile);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Root trajectories a^(n,i)(b) over a grid of b");
  sweep->add_option("--gamma", sweep_args.gamma, "gamma")->required();
  sweep->add_option("--n-min", sweep_args.n_min, "Smallest degree")->capture_default_str();
  sweep->add_option("--n-max", sweep_args.n_max, "Largest degree")->capture_default_str();
  sweep->add_option("--b-grid", sweep_args.b_grid, "Comma-separated b values")->required();

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path, "Manifest written by an earlier run")->required()->check(
      CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*exact) return cmd_exact(exact_args, settings);
    if (*conditional) return cmd_conditional(cond_args, settings);
    if (*oracle) return cmd_oracle(oracle_args, settings);
    if (*refute_cmd) return cmd_refute(model_path, settings);
    if (*sweep) return cmd_sweep(sweep_args, settings);
    if (*replay) {
      std::ifstream in(manifest_path);
      json manifest;
      in >> manifest;
      auto replayed = manifest.at("argv").get<std::vector<std::string>>();
      if (!replayed.empty() && replayed.front() == "replay") throw ArgumentError("manifest records a replay");
      const fs::path dir = settings.directory();
      replayed.insert(replayed.begin(), {"--out-dir", dir.string()});
      return run(replayed);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConsistencyError& e) {
    std::cerr << "numerical consistency failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace frobenius::cli
