#pragma once

// The a = b = 0 problem. The ansatz F = rho^s exp(-rho^2/2) sum_j c_j rho^(2j)
// gives the two-term recurrence
//
//   c_{j+1} = (4j + 2s - W + 1) / (2 (j+1) (2j + 2s + 1)) c_j,
//
// which terminates after c_nu exactly when W = 2(2 nu + |gamma| + 1).

#include <vector>

#include "frobenius/core.hpp"
#include "frobenius/rational.hpp"

namespace frobenius {

struct ExactState {
  int nu = 0;
  double gamma = 0.0;
  double W = 0.0;
  PolynomialSolution solution;  // step 2, b_half 0
};

double exact_eigenvalue(int nu, double gamma);
Rational exact_eigenvalue(int nu, const Rational& gamma);

ExactState exact_state(int nu, double gamma);

/// Coefficients c_0..c_nu of the terminating series, c_0 = 1.
std::vector<Rational> exact_coefficients(int nu, const Rational& gamma);

/// First `count` coefficients of the series for arbitrary W. Off the spectrum
/// the series never terminates.
std::vector<Rational> general_series_coefficients(const Rational& W, const Rational& gamma, int count);
std::vector<double> general_series_coefficients(double W, double gamma, int count);

}  // namespace frobenius
