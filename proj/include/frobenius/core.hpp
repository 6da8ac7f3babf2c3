#pragma once

// Canonical radial problem
//
//   F''(rho) + [W + (1/4 - gamma^2)/rho^2 - rho^2 - a/rho - b rho] F(rho) = 0,
//
// the polynomial-times-prefactor solution ansatz and grid sampled functions.

#include <cstddef>
#include <span>
#include <vector>

namespace frobenius {

struct RadialProblem {
  double gamma = 0.0;
  double a = 0.0;  // Coulomb-term strength
  double b = 0.0;  // linear-term strength

  /// Indicial exponent s = |gamma| + 1/2 of the regular solution at rho = 0.
  [[nodiscard]] double exponent() const;
  [[nodiscard]] bool exactly_solvable() const { return a == 0.0 && b == 0.0; }
  /// Effective potential (gamma^2 - 1/4)/rho^2 + rho^2 + a/rho + b rho.
  [[nodiscard]] double potential(double rho) const;
};

double exponent(const RadialProblem& problem);
double exponent(double gamma);

/// F(rho) = rho^s exp(-b_half rho - rho^2/2) sum_j coeffs[j] rho^(step j).
struct PolynomialSolution {
  double s = 0.5;
  double b_half = 0.0;
  std::vector<double> coeffs{1.0};
  double W = 0.0;
  int step = 1;

  [[nodiscard]] std::size_t degree() const;  // in rho
  [[nodiscard]] double value(double rho) const;

  struct Jet {
    double f;
    double df;
    double d2f;
  };
  /// F, F' and F'' from the closed-form product rule.
  [[nodiscard]] Jet jet(double rho) const;
};

/// Rewrites a step-2 series in powers of rho (step 1).
PolynomialSolution to_unit_step(const PolynomialSolution& solution);

/// Samples on strictly increasing nodes with quadrature weights.
///
/// The default weights are trapezoidal over the nodes. The numerical
/// eigensolver supplies its own midpoint weights so that expectation values
/// use the same quadrature as its discrete operator.
class GridFunction {
 public:
  GridFunction(std::vector<double> nodes, std::vector<double> values);
  GridFunction(std::vector<double> nodes, std::vector<double> values, std::vector<double> weights);

  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }

  /// L2 norm sqrt(sum w_i f_i^2).
  [[nodiscard]] double norm() const;
  [[nodiscard]] GridFunction normalized() const;
  /// sum w_i f_i^2 g(rho_i).
  template <typename Weight>
  [[nodiscard]] double integrate_squared(Weight&& g) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * values_[i] * values_[i] * g(nodes_[i]);
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

std::vector<double> trapezoid_weights(std::span<const double> nodes);

/// 200 log-spaced points on [1e-3, 8] unless overridden.
std::vector<double> log_grid(double lo = 1e-3, double hi = 8.0, std::size_t count = 200);

/// Samples solution.value on the grid; the result is not normalized.
GridFunction sample(const PolynomialSolution& solution, std::span<const double> grid);

/// Maximum |F'' + [W + (1/4 - gamma^2)/rho^2 - rho^2 - a/rho - b rho] F| over the grid.
/// Throws DomainError when a grid point is not strictly positive.
double ode_residual(const PolynomialSolution& solution, const RadialProblem& problem,
                    std::span<const double> grid);
double ode_residual(const PolynomialSolution& solution, const RadialProblem& problem);

/// Number of sign changes in the samples. A zero sample carries the sign of
/// the sample before it, so zeros never add a crossing on their own.
int count_nodes(std::span<const double> values);
int count_nodes(const GridFunction& f);
/// Same, with samples below relative_floor * max|value| treated as zeros.
/// Numerical eigenvectors carry sign noise in their decayed tails.
int count_nodes(std::span<const double> values, double relative_floor);

}  // namespace frobenius
