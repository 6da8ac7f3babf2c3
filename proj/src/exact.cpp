#include "frobenius/exact.hpp"

#include <cmath>
#include <string>

#include "frobenius/errors.hpp"

namespace frobenius {

namespace {

void require_index(int nu) {
  if (nu < 0) throw ArgumentError("radial index must be non-negative, got " + std::to_string(nu));
}

std::vector<double> to_doubles(const std::vector<Rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.get_d());
  return out;
}

}  // namespace

double exact_eigenvalue(int nu, double gamma) {
  require_index(nu);
  return 2.0 * (2.0 * nu + std::abs(gamma) + 1.0);
}

Rational exact_eigenvalue(int nu, const Rational& gamma) {
  require_index(nu);
  return Rational(2) * (Rational(2 * nu) + abs(gamma) + 1);
}

std::vector<Rational> exact_coefficients(int nu, const Rational& gamma) {
  require_index(nu);
  const Rational two_s = 2 * abs(gamma) + 1;
  std::vector<Rational> c{Rational(1)};
  c.reserve(static_cast<std::size_t>(nu) + 1);
  for (int j = 0; j < nu; ++j) {
    Rational next = Rational(2 * (j - nu)) / (Rational(j + 1) * (Rational(2 * j + 1) + two_s)) * c.back();
    next.canonicalize();
    c.push_back(next);
  }
  return c;
}

ExactState exact_state(int nu, double gamma) {
  require_index(nu);
  ExactState state;
  state.nu = nu;
  state.gamma = gamma;
  state.W = exact_eigenvalue(nu, gamma);
  state.solution.s = exponent(gamma);
  state.solution.b_half = 0.0;
  state.solution.coeffs = to_doubles(exact_coefficients(nu, to_rational(gamma)));
  state.solution.W = state.W;
  state.solution.step = 2;
  return state;
}

std::vector<Rational> general_series_coefficients(const Rational& W, const Rational& gamma, int count) {
  if (count < 1) throw ArgumentError("coefficient count must be at least 1");
  const Rational two_s = 2 * abs(gamma) + 1;
  std::vector<Rational> c{Rational(1)};
  c.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j + 1 < count; ++j) {
    Rational next = (Rational(4 * j + 1) + two_s - W) / (Rational(2 * (j + 1)) * (Rational(2 * j + 1) + two_s)) * c.back();
    next.canonicalize();
    c.push_back(next);
  }
  return c;
}

std::vector<double> general_series_coefficients(double W, double gamma, int count) {
  return to_doubles(general_series_coefficients(to_rational(W), to_rational(gamma), count));
}

}  // namespace frobenius
