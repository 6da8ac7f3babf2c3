// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "frobenius/conditional.hpp"
#include "frobenius/core.hpp"
#include "frobenius/exact.hpp"
#include "frobenius/models.hpp"
#include "frobenius/oracle.hpp"

#ifdef FROBENIUS_WITH_CLI
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "cli.hpp"
#endif

using namespace frobenius;

namespace {

const std::vector<double> kGammas{0.0, 0.5, 1.0, 2.5};

// (gamma, b) battery reused by every criterion that samples the conditional families.
const std::vector<std::pair<double, double>> kBattery{
    {0.0, 0.0}, {0.0, 1.0},  {0.5, 0.0},  {0.5, 1.0}, {0.5, -2.0},
    {1.0, 0.5}, {1.0, 3.0},  {2.5, -1.0}, {2.5, 2.0}, {3.0, 5.0},
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

int failures = 0;

void criterion(int number, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  out.detail.precision(4);
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  if (!out.pass) ++failures;
  std::printf("%s [%d] %s: %s\n", out.pass ? "PASS" : "FAIL", number, title, out.detail.str().c_str());
  std::fflush(stdout);
}

std::string point(double g, double b) {
  std::ostringstream s;
  s << "(gamma=" << g << ", b=" << b << ")";
  return s.str();
}

void exact_spectrum(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double g : kGammas) {
    const auto est = solve_spectrum(RadialProblem{g, 0.0, 0.0});
    for (int nu = 0; nu <= 3; ++nu) {
      const double err = std::abs(est.eigenvalues[nu] - exact_eigenvalue(nu, g));
      worst = std::max(worst, err);
      if (!(err <= 1e-6)) out.fail("gamma=" + std::to_string(g) + " nu=" + std::to_string(nu));
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!(seconds < 30.0)) out.fail("runtime " + std::to_string(seconds) + " s");
  out.detail << "max |W_oracle - 2(2nu+|gamma|+1)| = " << worst << " over 16 states in " << seconds << " s";
}

void termination_exact(Outcome& out) {
  int checked = 0;
  const std::vector<Rational> gammas{Rational(0), Rational(1, 2), Rational(1), Rational(5, 2), Rational(1, 3)};
  for (const auto& g : gammas) {
    for (int nu = 0; nu <= 20; ++nu) {
      const auto c = general_series_coefficients(exact_eigenvalue(nu, g), g, nu + 4);
      if (c[nu] == 0) out.fail("c_nu vanished at nu=" + std::to_string(nu));
      for (int j = nu + 1; j < nu + 4; ++j) {
        if (c[j] != 0) out.fail("c_" + std::to_string(j) + " != 0 at nu=" + std::to_string(nu));
      }
      ++checked;
    }
  }
  out.detail << "c_{nu+1} = 0 in exact rationals for " << checked << " (nu, gamma) pairs, nu <= 20";
}

void closed_forms(Outcome& out) {
  double worst = 0.0;
  for (auto [g, b] : kBattery) {
    const auto report = closed_form_check_n01(g, b, 1e-12);
    worst = std::max(worst, report.max_deviation);
    if (!report) out.fail(point(g, b) + ": " + report.mismatches.front());
  }
  out.detail << "n = 0, 1 roots and coefficients on " << kBattery.size() << " points, max relative deviation " << worst;
}

void conditional_in_spectrum(Outcome& out) {
  double worst = 0.0;
  int triples = 0;
  for (auto [g, b] : kBattery) {
    for (int n = 0; n <= 3; ++n) {
      const auto family = conditional_family(n, g, b);
      for (std::size_t i = 0; i < family.roots.size(); ++i) {
        const auto check = spectrum_vs_formula(family.problem(i), family.W);
        worst = std::max(worst, check.gap);
        ++triples;
        const int expected = static_cast<int>(i);  // member i + 1 is state i
        if (!(check.gap <= 1e-5) || check.nearest_index != expected || check.nearest_nodes != expected) {
          std::ostringstream why;
          why << point(g, b) << " n=" << n << " i=" << i + 1 << " gap=" << check.gap << " index=" << check.nearest_index
              << " nodes=" << check.nearest_nodes;
          out.fail(why.str());
        }
      }
    }
  }
  out.detail << triples << " triples for n <= 3, max gap " << worst << ", every index and node count equals i - 1";
}

void residuals(Outcome& out) {
  double exact_worst = 0.0, conditional_worst = 0.0, scaled_worst = 0.0;
  for (double g : kGammas) {
    for (int nu = 0; nu <= 3; ++nu) {
      const double r = ode_residual(exact_state(nu, g).solution, RadialProblem{g, 0.0, 0.0});
      exact_worst = std::max(exact_worst, r);
      if (!(r <= 1e-10)) out.fail("exact gamma=" + std::to_string(g) + " nu=" + std::to_string(nu));
    }
  }
  for (auto [g, b] : kBattery) {
    for (int n = 0; n <= 3; ++n) {
      const auto family = conditional_family(n, g, b);
      for (std::size_t i = 0; i < family.solutions.size(); ++i) {
        const double r = ode_residual(family.solutions[i], family.problem(i));
        conditional_worst = std::max(conditional_worst, r);
        if (!(r <= 1e-10)) out.fail(point(g, b) + " n=" + std::to_string(n));
      }
    }
  }
  // Beyond the battery the c_0 = 1 normalization lets series terms grow to
  // 1e7 and more, so the bound is applied relative to g * sum |c_j| rho^j.
  const auto grid = log_grid();
  auto scaled = [&](const PolynomialSolution& sol, const RadialProblem& p) {
    auto magnitude = sol;
    for (double& c : magnitude.coeffs) c = std::abs(c);
    double scale = 1.0;
    for (double v : sample(magnitude, grid).values()) scale = std::max(scale, v);
    return ode_residual(sol, p, grid) / scale;
  };
  for (double g : kGammas) {
    for (int nu = 0; nu <= 20; ++nu) scaled_worst = std::max(scaled_worst, scaled(exact_state(nu, g).solution, {g, 0.0, 0.0}));
  }
  for (auto [g, b] : kBattery) {
    for (int n = 0; n <= 10; ++n) {
      const auto family = conditional_family(n, g, b);
      for (std::size_t i = 0; i < family.solutions.size(); ++i) {
        scaled_worst = std::max(scaled_worst, scaled(family.solutions[i], family.problem(i)));
      }
    }
  }
  if (!(scaled_worst <= 1e-10)) out.fail("scaled residual beyond the battery");
  out.detail << "max residual exact(nu<=3) " << exact_worst << ", conditional(n<=3) " << conditional_worst
             << "; scaled residual for nu<=20, n<=10 " << scaled_worst;
}

void hft(Outcome& out) {
  struct Point {
    double gamma, a, b;
    int nu;
  };
  const std::vector<Point> points{
      {0.5, 0.0, 0.0, 0},  {0.0, 0.0, 0.0, 0},  {0.0, 1.0, 1.0, 0},   {0.5, 1.0, 1.0, 1},
      {1.0, -1.0, 0.5, 0}, {1.0, 2.0, -1.0, 2}, {2.5, 0.0, 2.0, 0},   {2.5, -3.0, 1.0, 1},
      {0.0, -2.0, 3.0, 0}, {1.5, 0.5, 0.5, 1},  {3.0, 1.0, -2.0, 0},  {0.5, -1.0, -1.0, 2},
  };
  double worst = 0.0;
  for (const auto& p : points) {
    const auto r = hft_check(RadialProblem{p.gamma, p.a, p.b}, p.nu, 1e-3);
    worst = std::max(worst, r.max_rel_error);
    std::ostringstream where;
    where << "(" << p.gamma << "," << p.a << "," << p.b << ",nu=" << p.nu << ")";
    if (!r.valid) out.fail(where.str() + " invalid: " + r.note);
    if (!(r.max_rel_error <= 1e-3)) out.fail(where.str() + " rel error");
    if (!(r.dW_da_fd > 0 && r.dW_db_fd > 0 && r.expect_inv_rho > 0 && r.expect_rho > 0)) {
      out.fail(where.str() + " non-positive");
    }
  }
  const auto analytic = hft_check(RadialProblem{0.5, 0.0, 0.0}, 0, 1e-3);
  const double target = 2.0 / std::sqrt(std::numbers::pi);
  const double dev = std::max(std::abs(analytic.expect_inv_rho - target), std::abs(analytic.expect_rho - target));
  if (!(dev <= 1e-4)) out.fail("analytic expectations off by " + std::to_string(dev));
  out.detail << points.size() << " points, max rel error " << worst << ", all partials positive; |<1/rho>, <rho> - 2/sqrt(pi)| <= " << dev;
}

void refutation(Outcome& out) {
  // Gaps pinned from the first oracle run of these models.
  struct Case {
    Model model;
    std::string coulomb;
    double pinned_gap;
  };
  const std::vector<Case> cases{
      {PseudoConfinedModel{1.0, 0.5, 1.0, 1.0, 1.0, 0}, "b_t", 2.493034252001742},
      {ConfinedPdmModel{1.0, 0.0, 1.0, 1.0, 0.5, 0}, "B", 4.462911614453786},
  };
  for (const auto& c : cases) {
    const auto r = refute(c.model);
    const double claimed = r.mustafa_partials.at(c.coulomb);
    if (claimed != 0.0) out.fail(r.model + " Coulomb partial " + std::to_string(claimed));
    if (!(r.expect_inv_rho > 0.3)) out.fail(r.model + " <1/rho> " + std::to_string(r.expect_inv_rho));
    if (!(r.gap > 0.01)) out.fail(r.model + " gap " + std::to_string(r.gap));
    if (!(std::abs(r.gap - c.pinned_gap) <= 1e-6)) out.fail(r.model + " gap moved from pinned value");
    out.detail << r.model << ": d/d" << c.coulomb << " claimed 0, <1/rho> = " << r.expect_inv_rho << ", gap " << r.gap << "; ";
  }
}

void realness(Outcome& out) {
  double worst = 0.0;
  int families = 0;
  for (auto [g, b] : kBattery) {
    for (int n = 0; n <= 10; ++n) {
      const auto cert = admissible_a_certified(n, g, b);
      ++families;
      worst = std::max(worst, cert.max_relative_imag);
      if (static_cast<int>(cert.roots.size()) != n + 1) out.fail(point(g, b) + " root count");
      if (!(cert.max_relative_imag < 1e-9)) out.fail(point(g, b) + " imaginary part");
      for (const auto& w : cert.warnings) {
        if (w.find("companion") != std::string::npos) out.fail(point(g, b) + " needed the symmetric fallback");
      }
    }
  }
  out.detail << families << " companion-matrix root sets, n <= 10, max |Im|/(1+|z|) " << worst;
}

#ifdef FROBENIUS_WITH_CLI
namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void reproducibility(Outcome& out) {
  std::mt19937_64 rng(std::random_device{}());
  const auto root = fs::temp_directory_path() / ("frobenius_acceptance_" + std::to_string(rng()));
  const std::string model = (fs::path(FROBENIUS_SOURCE_DIR) / "data" / "models" / "confined_pdm.json").string();
  const std::vector<std::vector<std::string>> commands{
      {"exact", "--gamma", "5/2", "--nu-max", "3"},
      {"conditional", "--n", "4", "--gamma", "0", "--b", "1.5"},
      {"oracle", "--gamma", "1", "--a", "-1", "--b", "2", "--hft", "--nu", "1", "--write-states"},
      {"refute", model},
      {"sweep", "--gamma", "0.5", "--n-min", "0", "--n-max", "3", "--b-grid", "-2,-1,0,1,2"},
  };
  int files = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    const auto first = root / ("run" + std::to_string(k));
    const auto second = root / ("replay" + std::to_string(k));
    auto args = commands[k];
    args.insert(args.end(), {"--out-dir", first.string()});
    if (cli::run(args) != 0) {
      out.fail(commands[k].front() + " did not run");
      continue;
    }
    const auto manifest = first / (commands[k].front() + ".manifest.json");
    if (cli::run({"replay", manifest.string(), "--out-dir", second.string()}) != 0) {
      out.fail(commands[k].front() + " replay did not run");
      continue;
    }
    const auto recorded = nlohmann::json::parse(slurp(manifest));
    for (const auto& name : recorded.at("artifacts")) {
      const auto file = name.get<std::string>();
      ++files;
      if (slurp(first / file).empty() || slurp(first / file) != slurp(second / file)) {
        out.fail(commands[k].front() + "/" + file + " differs");
      }
    }
  }
  fs::remove_all(root);
  out.detail << files << " artifacts from " << commands.size() << " commands identical after replay";
}
#endif

}  // namespace

int main() {
  criterion(1, "exact spectrum reproduction", exact_spectrum);
  criterion(2, "termination exactness", termination_exact);
  criterion(3, "conditional closed forms", closed_forms);
  criterion(4, "conditional eigenvalues in the oracle spectrum", conditional_in_spectrum);
  criterion(5, "residual bound", residuals);
  criterion(6, "HFT positivity", hft);
  criterion(7, "refutation reproduction", refutation);
  criterion(8, "realness of the admissible couplings", realness);
#ifdef FROBENIUS_WITH_CLI
  criterion(9, "manifest reproducibility", reproducibility);
#else
  criterion(9, "manifest reproducibility", [](Outcome& out) { out.fail("built without the command-line tool"); });
#endif
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
