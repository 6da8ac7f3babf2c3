#pragma once

// General a, b. The ansatz F = rho^s exp(-(b/2) rho - rho^2/2) sum_j c_j rho^j
// gives the three-term recurrence
//
//   c_{j+2} = A_j c_{j+1} + B_j c_j,   j = -1, 0, 1, ...,   c_{-1} = 0, c_0 = 1,
//   A_j = (a + b (j + s + 1)) / ((j + 2)(j + 2s + 1)),
//   B_j = (4 (2j + 2s - W + 1) - b^2) / (4 (j + 2)(j + 2s + 1)).
//
// A degree-n polynomial needs B_n = 0, which fixes W = 2(n + |gamma| + 1) - b^2/4,
// and in addition c_{n+1}(a, b) = 0, which restricts the model parameters.
// The second condition is a degree n+1 polynomial in a with n+1 real roots.

#include <string>
#include <vector>

#include "frobenius/core.hpp"
#include "frobenius/rational.hpp"

namespace frobenius {

struct RecurrenceCoeffs {
  double A = 0.0;
  double B = 0.0;
};

RecurrenceCoeffs recurrence_step(int j, double s, double a, double b, double W);

double termination_energy(int n, double gamma, double b);
Rational termination_energy(int n, const Rational& gamma, const Rational& b);

/// B_j once W is the degree-n termination energy; independent of a.
double simplified_B(int j, int n, double s);

/// c_0..c_{count-1} of the three-term recurrence, evaluated in floating point.
std::vector<double> three_term_coefficients(double s, double a, double b, double W, int count);

/// c_{n+1}(a, b) at W = W^(n), evaluated in floating point.
double second_condition_value(int n, double gamma, double a, double b);

/// c_{n+1} as an exact polynomial in a (ascending powers) for fixed gamma, b.
struct CoefficientPolynomial {
  int n = 0;
  double gamma = 0.0;
  double b = 0.0;
  std::vector<Rational> poly;

  [[nodiscard]] int degree() const { return static_cast<int>(poly.size()) - 1; }
  [[nodiscard]] double operator()(double a) const;
  /// Coefficients divided by the leading one, as doubles.
  [[nodiscard]] std::vector<double> monic() const;
};

CoefficientPolynomial coefficient_polynomial(int n, const Rational& gamma, const Rational& b);
CoefficientPolynomial coefficient_polynomial(int n, double gamma, double b);

struct RootCertificate {
  std::vector<double> roots;          // descending
  double max_relative_imag = 0.0;     // before the imaginary parts were dropped
  double max_polished_residual = 0.0; // |p(root)| / sum |p_k root^k|
  std::vector<std::string> warnings;
};

/// Real roots of a polynomial given in ascending powers. Throws
/// ConsistencyError if a root has |Im| > 1e-9 (1 + |root|).
RootCertificate certified_real_roots(const std::vector<double>& ascending);

/// The n+1 values a^(n,i)(b), sorted so that a^(n,1) > ... > a^(n,n+1).
std::vector<double> admissible_a(int n, double gamma, double b);
RootCertificate admissible_a_certified(int n, double gamma, double b);

struct ConditionalFamily {
  int n = 0;
  double gamma = 0.0;
  double b = 0.0;
  double W = 0.0;
  std::vector<double> roots;                  // descending in a
  std::vector<PolynomialSolution> solutions;  // one per root, same order
  std::vector<std::string> warnings;

  [[nodiscard]] RadialProblem problem(std::size_t i) const { return {gamma, roots.at(i), b}; }
};

ConditionalFamily conditional_family(int n, double gamma, double b);

struct ClosedFormReport {
  bool passed = true;
  double max_deviation = 0.0;  // scaled by 1 + |expected|
  std::vector<std::string> mismatches;

  explicit operator bool() const { return passed; }
};

/// Compares the n = 0 and n = 1 families against their closed forms
///   n = 0: a = -b s, F = rho^s exp(...);
///   n = 1: a = (+-sqrt(b^2 + 16 s) - b (2s + 1)) / 2,
///          c_1 = (+-sqrt(b^2 + 16 s) - b) / (4 s),
/// and the quadratic 4s(2s+1) c_2 = a^2 + a b (2s+1) + b^2 s (s+1) - 4s.
ClosedFormReport closed_form_check_n01(double gamma, double b, double tolerance = 1e-12);

}  // namespace frobenius
