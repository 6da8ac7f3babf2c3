#include "frobenius/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frobenius/errors.hpp"

namespace frobenius {

namespace {
// Eigenvector components below this fraction of the peak are rounding noise.
constexpr double kNodeFloor = 1e-10;
}  // namespace

void OracleConfig::validate() const {
  if (!(rho_max > 0.0)) throw ArgumentError("oracle: rho_max must be positive");
  if (num_points < 100) throw ArgumentError("oracle: num_points must be at least 100");
  if (num_states < 1) throw ArgumentError("oracle: num_states must be at least 1");
  if (num_states > num_points / 10) {
    throw ArgumentError("oracle: " + std::to_string(num_states) + " states cannot be resolved on " +
                        std::to_string(num_points) + " points (limit num_points/10)");
  }
}

OracleConfig default_oracle_config(const RadialProblem& problem, int num_states) {
  OracleConfig config;
  // An attractive Coulomb term compresses the states, so only a > 0 widens the box.
  config.rho_max = 12.0 + std::abs(problem.b) + 0.5 * std::max(problem.a, 0.0);
  // Keep the spacing of the 12 / 4000 reference grid.
  config.num_points = std::max(4000, static_cast<int>(std::ceil(config.rho_max / 12.0 * 4000.0)));
  config.num_states = num_states;
  return config;
}

GridSpectrum solve_on_grid(const RadialOperator& op, double rho_max, int num_points, int num_states,
                           bool with_states) {
  const int n = num_points;
  const double s = exponent(op.gamma);
  const double h = rho_max / (n + 0.5);
  const double inv_h2 = 1.0 / (h * h);

  std::vector<double> nodes(n), diag(n), off(n > 1 ? n - 1 : 1, 0.0);
  for (int i = 0; i < n; ++i) nodes[i] = (i + 0.5) * h;
  for (int i = 0; i < n; ++i) {
    const double x = i + 0.5;
    // face fluxes (i h)^2s and ((i+1) h)^2s relative to the cell weight (x h)^2s
    const double left = i == 0 ? 0.0 : std::pow(i / x, 2.0 * s);
    const double right = std::pow((i + 1.0) / x, 2.0 * s);
    const double rho = nodes[i];
    diag[i] = (left + right) * inv_h2 + op.quadratic * rho * rho + op.coulomb / rho + op.linear * rho;
    if (i + 1 < n) off[i] = -std::pow((i + 1.0) * (i + 1.0) / (x * (x + 1.0)), s) * inv_h2;
  }

  lapack_int found = 0;
  std::vector<double> w(n);
  std::vector<double> z(with_states ? static_cast<std::size_t>(n) * num_states : 1);
  std::vector<lapack_int> ifail(n);
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info =
      LAPACKE_dstevx(LAPACK_COL_MAJOR, with_states ? 'V' : 'N', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1,
                     num_states, abstol, &found, w.data(), z.data(), n, ifail.data());
  if (info != 0 || found != num_states) {
    throw ConsistencyError("oracle: tridiagonal eigensolver failed (info " + std::to_string(info) + ")");
  }

  GridSpectrum out;
  out.h = h;
  out.eigenvalues.assign(w.begin(), w.begin() + num_states);
  if (with_states) {
    const double scale = 1.0 / std::sqrt(h);
    const std::vector<double> weights(n, h);
    for (int k = 0; k < num_states; ++k) {
      std::vector<double> values(z.begin() + static_cast<std::ptrdiff_t>(k) * n,
                                 z.begin() + static_cast<std::ptrdiff_t>(k + 1) * n);
      double peak = 0.0;
      for (double v : values) peak = std::max(peak, std::abs(v));
      double sign = 1.0;
      for (double v : values) {
        if (std::abs(v) > 1e-6 * peak) {
          sign = v > 0.0 ? 1.0 : -1.0;
          break;
        }
      }
      for (double& v : values) v *= sign * scale;
      out.states.emplace_back(nodes, std::move(values), weights);
    }
  }
  return out;
}

SpectrumEstimate solve_operator_spectrum(const RadialOperator& op, const OracleConfig& config) {
  config.validate();
  if (!(op.quadratic > 0.0)) throw ArgumentError("oracle: the r^2 coefficient must be positive");
  const int coarse_points = config.num_points / 2;
  const auto fine = solve_on_grid(op, config.rho_max, config.num_points, config.num_states, true);
  const auto coarse = solve_on_grid(op, config.rho_max, coarse_points, config.num_states, false);

  SpectrumEstimate est;
  est.problem = {op.gamma, op.coulomb, op.linear};
  est.quadratic = op.quadratic;
  est.config = config;
  est.fine_eigenvalues = fine.eigenvalues;
  est.coarse_eigenvalues = coarse.eigenvalues;
  const double r2 = (coarse.h / fine.h) * (coarse.h / fine.h);
  for (int k = 0; k < config.num_states; ++k) {
    const double wf = fine.eigenvalues[k], wc = coarse.eigenvalues[k];
    const double extrapolated = (r2 * wf - wc) / (r2 - 1.0);
    est.eigenvalues.push_back(extrapolated);
    est.accuracy.push_back(std::abs(wf - extrapolated));
    if (std::abs(wf - wc) > 1e-4) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "state " << k << ": grids disagree by " << std::abs(wf - wc) << " (> 1e-4), extrapolation unreliable";
      est.warnings.push_back(msg.str());
    }
  }
  est.states = fine.states;
  for (const auto& state : est.states) {
    est.node_counts.push_back(count_nodes(state.values(), kNodeFloor));
    const auto& v = state.values();
    double peak = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      peak = std::max(peak, std::abs(v[i]));
      if (i >= v.size() - v.size() / 100) tail = std::max(tail, std::abs(v[i]));
    }
    if (tail > 1e-8 * peak) {
      est.warnings.push_back("state " + std::to_string(est.node_counts.size() - 1) +
                             " has not decayed at rho_max; enlarge the domain");
    }
  }
  for (std::size_t k = 1; k < est.eigenvalues.size(); ++k) {
    if (!(est.eigenvalues[k] > est.eigenvalues[k - 1])) {
      throw ConsistencyError("oracle: extrapolated eigenvalues are not strictly ascending");
    }
  }
  return est;
}

SpectrumEstimate solve_spectrum(const RadialProblem& problem, const OracleConfig& config) {
  return solve_operator_spectrum(RadialOperator::canonical(problem), config);
}

SpectrumEstimate solve_spectrum(const RadialProblem& problem) {
  return solve_spectrum(problem, default_oracle_config(problem));
}

double expectation(const GridFunction& state, Weight weight) {
  if (std::abs(state.norm() - 1.0) > 1e-8) throw ArgumentError("expectation: state is not normalized");
  switch (weight) {
    case Weight::inv_rho:
      return state.integrate_squared([](double rho) { return 1.0 / rho; });
    case Weight::rho:
      return state.integrate_squared([](double rho) { return rho; });
  }
  throw ArgumentError("expectation: unknown weight");
}

HftReport hft_check(const RadialProblem& problem, int nu, double delta, const OracleConfig& config) {
  if (!(delta > 0.0)) throw ArgumentError("hft_check: delta must be positive");
  if (nu < 0) throw ArgumentError("hft_check: state index must be non-negative");
  OracleConfig cfg = config;
  cfg.num_states = std::max(cfg.num_states, nu + 1);

  const auto center = solve_spectrum(problem, cfg);
  HftReport report;
  report.problem = problem;
  report.nu = nu;
  report.delta = delta;
  report.expect_inv_rho = expectation(center.states[nu], Weight::inv_rho);
  report.expect_rho = expectation(center.states[nu], Weight::rho);

  const int nodes = center.node_counts[nu];
  auto shifted = [&](double da, double db) {
    const auto est = solve_spectrum(RadialProblem{problem.gamma, problem.a + da, problem.b + db}, cfg);
    if (est.node_counts[nu] != nodes) {
      report.valid = false;
      report.note = "node count of state " + std::to_string(nu) + " changed under perturbation";
    }
    return est.eigenvalues[nu];
  };
  report.dW_da_fd = (shifted(delta, 0.0) - shifted(-delta, 0.0)) / (2.0 * delta);
  report.dW_db_fd = (shifted(0.0, delta) - shifted(0.0, -delta)) / (2.0 * delta);
  report.max_rel_error = std::max(std::abs(report.dW_da_fd - report.expect_inv_rho) / std::abs(report.expect_inv_rho),
                                  std::abs(report.dW_db_fd - report.expect_rho) / std::abs(report.expect_rho));
  if (nodes != nu && report.valid) {
    report.valid = false;
    report.note = "state " + std::to_string(nu) + " has " + std::to_string(nodes) + " nodes";
  }
  return report;
}

HftReport hft_check(const RadialProblem& problem, int nu, double delta) {
  return hft_check(problem, nu, delta, default_oracle_config(problem, nu + 1));
}

FormulaCheck spectrum_vs_formula(const RadialProblem& problem, double formula_W, const OracleConfig& config) {
  OracleConfig cfg = config;
  SpectrumEstimate est = solve_spectrum(problem, cfg);
  while (est.eigenvalues.back() <= formula_W && cfg.num_states * 2 <= cfg.num_points / 10) {
    cfg.num_states *= 2;
    est = solve_spectrum(problem, cfg);
  }
  FormulaCheck check;
  check.formula_W = formula_W;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < est.eigenvalues.size(); ++k) {
    const double gap = std::abs(est.eigenvalues[k] - formula_W);
    if (gap < best) {
      best = gap;
      check.nearest_index = static_cast<int>(k);
    }
  }
  const auto k = static_cast<std::size_t>(check.nearest_index);
  check.nearest_eigenvalue = est.eigenvalues[k];
  check.nearest_nodes = est.node_counts[k];
  check.gap = best;
  check.accuracy = est.accuracy[k];
  check.threshold = std::max(50.0 * check.accuracy, 1e-9);
  check.in_spectrum = check.gap <= check.threshold;
  return check;
}

FormulaCheck spectrum_vs_formula(const RadialProblem& problem, double formula_W) {
  return spectrum_vs_formula(problem, formula_W, default_oracle_config(problem));
}

}  // namespace frobenius
