#include "frobenius/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frobenius/errors.hpp"

namespace frobenius {

double exponent(double gamma) { return std::abs(gamma) + 0.5; }
double exponent(const RadialProblem& problem) { return exponent(problem.gamma); }
double RadialProblem::exponent() const { return frobenius::exponent(gamma); }

double RadialProblem::potential(double rho) const {
  return (gamma * gamma - 0.25) / (rho * rho) + rho * rho + a / rho + b * rho;
}

std::size_t PolynomialSolution::degree() const {
  return coeffs.empty() ? 0 : static_cast<std::size_t>(step) * (coeffs.size() - 1);
}

double PolynomialSolution::value(double rho) const {
  double p = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    p += coeffs[j] * std::pow(rho, static_cast<double>(step) * static_cast<double>(j));
  }
  return std::pow(rho, s) * std::exp(-b_half * rho - 0.5 * rho * rho) * p;
}

PolynomialSolution::Jet PolynomialSolution::jet(double rho) const {
  // F = g P with g = rho^s exp(phi), phi = -b_half rho - rho^2/2.
  double p = 0.0, dp = 0.0, d2p = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double k = static_cast<double>(step) * static_cast<double>(j);
    const double c = coeffs[j];
    p += c * std::pow(rho, k);
    if (k >= 1.0) dp += c * k * std::pow(rho, k - 1.0);
    if (k >= 2.0) d2p += c * k * (k - 1.0) * std::pow(rho, k - 2.0);
  }
  const double g = std::pow(rho, s) * std::exp(-b_half * rho - 0.5 * rho * rho);
  const double log_slope = s / rho - b_half - rho;                            // g'/g
  const double curvature = log_slope * log_slope - s / (rho * rho) - 1.0;     // g''/g
  return {g * p, g * (log_slope * p + dp), g * (d2p + 2.0 * log_slope * dp + curvature * p)};
}

PolynomialSolution to_unit_step(const PolynomialSolution& solution) {
  if (solution.step == 1) return solution;
  PolynomialSolution out = solution;
  out.step = 1;
  out.coeffs.assign(solution.degree() + 1, 0.0);
  for (std::size_t j = 0; j < solution.coeffs.size(); ++j) {
    out.coeffs[static_cast<std::size_t>(solution.step) * j] = solution.coeffs[j];
  }
  return out;
}

std::vector<double> trapezoid_weights(std::span<const double> nodes) {
  std::vector<double> w(nodes.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double half = 0.5 * (nodes[i + 1] - nodes[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : GridFunction(nodes, std::move(values), trapezoid_weights(nodes)) {}

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values, std::vector<double> weights)
    : nodes_(std::move(nodes)), values_(std::move(values)), weights_(std::move(weights)) {
  if (values_.size() != nodes_.size() || weights_.size() != nodes_.size()) {
    throw ArgumentError("grid function: nodes, values and weights differ in length");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw ArgumentError("grid function: nodes must be strictly increasing");
  }
}

double GridFunction::norm() const {
  return std::sqrt(integrate_squared([](double) { return 1.0; }));
}

GridFunction GridFunction::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw ArgumentError("grid function: cannot normalize a zero function");
  std::vector<double> v(values_);
  for (double& x : v) x /= n;
  return GridFunction(nodes_, std::move(v), weights_);
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ArgumentError("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> grid(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(ratio * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

GridFunction sample(const PolynomialSolution& solution, std::span<const double> grid) {
  std::vector<double> values;
  values.reserve(grid.size());
  for (double rho : grid) values.push_back(solution.value(rho));
  return GridFunction(std::vector<double>(grid.begin(), grid.end()), std::move(values));
}

double ode_residual(const PolynomialSolution& solution, const RadialProblem& problem,
                    std::span<const double> grid) {
  // With F = g P the equation reads g [P'' + 2 L P' + (g''/g + bracket) P] = 0.
  // The rho^2 pieces of g''/g and of the bracket cancel identically, so they are
  // removed symbolically before evaluation instead of subtracted in floating point.
  using ld = long double;
  const ld s = solution.s;
  const ld bh = solution.b_half;
  const ld gamma = problem.gamma;
  const ld inv_sq = s * s - s + 0.25L - gamma * gamma;
  const ld constant = static_cast<ld>(solution.W) + bh * bh - 2.0L * s - 1.0L;
  const ld inv = -2.0L * s * bh - static_cast<ld>(problem.a);
  const ld lin = 2.0L * bh - static_cast<ld>(problem.b);
  double worst = 0.0;
  for (double rho_d : grid) {
    if (!(rho_d > 0.0)) throw DomainError("ode_residual: grid point " + std::to_string(rho_d) + " is not positive");
    const ld rho = rho_d;
    ld p = 0.0L, dp = 0.0L, d2p = 0.0L;
    for (std::size_t j = 0; j < solution.coeffs.size(); ++j) {
      const ld k = static_cast<ld>(solution.step) * static_cast<ld>(j);
      const ld c = solution.coeffs[j];
      p += c * std::pow(rho, k);
      if (k >= 1.0L) dp += c * k * std::pow(rho, k - 1.0L);
      if (k >= 2.0L) d2p += c * k * (k - 1.0L) * std::pow(rho, k - 2.0L);
    }
    const ld g = std::pow(rho, s) * std::exp(-bh * rho - 0.5L * rho * rho);
    const ld slope = s / rho - bh - rho;
    const ld reduced = d2p + 2.0L * slope * dp + (inv_sq / (rho * rho) + constant + inv / rho + lin * rho) * p;
    worst = std::max(worst, static_cast<double>(std::abs(g * reduced)));
  }
  return worst;
}

double ode_residual(const PolynomialSolution& solution, const RadialProblem& problem) {
  const auto grid = log_grid();
  return ode_residual(solution, problem, grid);
}

int count_nodes(std::span<const double> values) {
  int count = 0;
  int previous = 0;
  for (double v : values) {
    const int sign = (v > 0.0) - (v < 0.0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) ++count;
    previous = sign;
  }
  return count;
}

int count_nodes(const GridFunction& f) { return count_nodes(f.values()); }

int count_nodes(std::span<const double> values, double relative_floor) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  const double floor = relative_floor * peak;
  std::vector<double> cleaned(values.begin(), values.end());
  for (double& v : cleaned) {
    if (std::abs(v) <= floor) v = 0.0;
  }
  return count_nodes(cleaned);
}

}  // namespace frobenius
