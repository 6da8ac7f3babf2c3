#pragma once

// Numerical ground truth for the radial problem on (0, rho_max].
//
// The unknown is G = F / rho^s, which is smooth at the origin for every
// gamma. In these variables the equation is the Sturm-Liouville problem
//
//   -(rho^2s G')' + rho^2s (rho^2 + a/rho + b rho) G = W rho^2s G,
//
// discretized by second-order finite volumes on the cell-centred grid
// rho_i = (i + 1/2) h with zero flux through rho = 0 and G = 0 at rho_max.
// The symmetrized matrix is tridiagonal and its normalized eigenvectors are
// the samples sqrt(h) F(rho_i). Eigenvalues from two resolutions are
// combined by Richardson extrapolation.

#include <string>
#include <vector>

#include "frobenius/core.hpp"

namespace frobenius {

/// -F'' + [(gamma^2 - 1/4)/r^2 + quadratic r^2 + coulomb/r + linear r] F = W F.
/// The canonical problem has quadratic = 1; other values describe the
/// physical radial equations before rescaling.
struct RadialOperator {
  double gamma = 0.0;
  double quadratic = 1.0;
  double coulomb = 0.0;
  double linear = 0.0;

  static RadialOperator canonical(const RadialProblem& problem) { return {problem.gamma, 1.0, problem.a, problem.b}; }
};

struct OracleConfig {
  double rho_max = 12.0;
  int num_points = 4000;
  int num_states = 4;

  void validate() const;
};

/// rho_max = 12 + |b| + max(a, 0)/2 with grid spacing at most 12/4000.
OracleConfig default_oracle_config(const RadialProblem& problem, int num_states = 4);

struct SpectrumEstimate {
  RadialProblem problem;  // (gamma, coulomb, linear) of the operator
  double quadratic = 1.0;
  OracleConfig config;
  std::vector<double> eigenvalues;         // Richardson-extrapolated, ascending
  std::vector<double> fine_eigenvalues;    // num_points cells
  std::vector<double> coarse_eigenvalues;  // num_points / 2 cells
  std::vector<double> accuracy;            // |fine - extrapolated| per state
  std::vector<GridFunction> states;        // normalized F on the fine grid
  std::vector<int> node_counts;
  std::vector<std::string> warnings;
};

/// Raw single-resolution eigenpairs; exposed for convergence studies.
struct GridSpectrum {
  double h = 0.0;
  std::vector<double> eigenvalues;
  std::vector<GridFunction> states;  // empty unless requested
};
GridSpectrum solve_on_grid(const RadialOperator& op, double rho_max, int num_points, int num_states,
                           bool with_states);

SpectrumEstimate solve_operator_spectrum(const RadialOperator& op, const OracleConfig& config);
SpectrumEstimate solve_spectrum(const RadialProblem& problem, const OracleConfig& config);
SpectrumEstimate solve_spectrum(const RadialProblem& problem);

enum class Weight { inv_rho, rho };

/// Quadrature of F^2 w(rho) for a normalized state.
double expectation(const GridFunction& state, Weight weight);

struct HftReport {
  RadialProblem problem;
  int nu = 0;
  double delta = 0.0;
  double dW_da_fd = 0.0;
  double expect_inv_rho = 0.0;
  double dW_db_fd = 0.0;
  double expect_rho = 0.0;
  double max_rel_error = 0.0;
  bool valid = true;
  std::string note;
};

HftReport hft_check(const RadialProblem& problem, int nu, double delta, const OracleConfig& config);
HftReport hft_check(const RadialProblem& problem, int nu, double delta = 1e-3);

struct FormulaCheck {
  double formula_W = 0.0;
  int nearest_index = -1;
  double nearest_eigenvalue = 0.0;
  int nearest_nodes = -1;
  double gap = 0.0;
  double accuracy = 0.0;
  double threshold = 0.0;  // 50 x accuracy, floored at 1e-9
  bool in_spectrum = false;
};

/// Locates the oracle eigenvalue closest to a claimed value. The number of
/// states is raised until the spectrum extends past the claim.
FormulaCheck spectrum_vs_formula(const RadialProblem& problem, double formula_W, const OracleConfig& config);
FormulaCheck spectrum_vs_formula(const RadialProblem& problem, double formula_W);

}  // namespace frobenius
