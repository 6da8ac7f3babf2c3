#include "frobenius/conditional.hpp"

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frobenius/errors.hpp"

namespace frobenius {

namespace {

void require_degree(int n) {
  if (n < 0) throw ArgumentError("polynomial degree n must be non-negative, got " + std::to_string(n));
}

using RationalPoly = std::vector<Rational>;  // ascending powers of a

RationalPoly add(const RationalPoly& p, const RationalPoly& q) {
  RationalPoly r(std::max(p.size(), q.size()), Rational(0));
  for (std::size_t k = 0; k < p.size(); ++k) r[k] += p[k];
  for (std::size_t k = 0; k < q.size(); ++k) r[k] += q[k];
  return r;
}

RationalPoly scale(const RationalPoly& p, const Rational& factor) {
  RationalPoly r(p);
  for (auto& c : r) {
    c *= factor;
    c.canonicalize();
  }
  return r;
}

// (alpha + beta a) p(a)
RationalPoly multiply_linear(const RationalPoly& p, const Rational& alpha, const Rational& beta) {
  RationalPoly r(p.size() + 1, Rational(0));
  for (std::size_t k = 0; k < p.size(); ++k) {
    r[k] += alpha * p[k];
    r[k + 1] += beta * p[k];
  }
  for (auto& c : r) c.canonicalize();
  return r;
}

long double horner(const std::vector<long double>& asc, long double x, long double* derivative) {
  long double p = 0.0L, dp = 0.0L;
  for (auto it = asc.rbegin(); it != asc.rend(); ++it) {
    dp = dp * x + p;
    p = p * x + *it;
  }
  if (derivative) *derivative = dp;
  return p;
}

double relative_residual(const std::vector<long double>& asc, long double x) {
  long double scale_sum = 0.0L, power = 1.0L;
  for (long double c : asc) {
    scale_sum += std::fabs(c) * power;
    power *= std::fabs(x);
  }
  const long double p = horner(asc, x, nullptr);
  return scale_sum > 0.0L ? static_cast<double>(std::fabs(p) / scale_sum) : 0.0;
}

double polish(const std::vector<long double>& asc, double x0) {
  long double x = x0;
  long double best = x;
  long double best_abs = std::fabs(horner(asc, x, nullptr));
  for (int iter = 0; iter < 60 && best_abs > 0.0L; ++iter) {
    long double dp = 0.0L;
    const long double p = horner(asc, x, &dp);
    if (dp == 0.0L) break;
    const long double step = p / dp;
    x -= step;
    const long double value = std::fabs(horner(asc, x, nullptr));
    if (value < best_abs) {
      best_abs = value;
      best = x;
    } else if (std::fabs(step) <= 1e-18L * (1.0L + std::fabs(x))) {
      break;
    }
    if (std::fabs(step) <= 1e-19L * (1.0L + std::fabs(x))) break;
  }
  return static_cast<double>(best);
}

}  // namespace

RecurrenceCoeffs recurrence_step(int j, double s, double a, double b, double W) {
  const double denominator = (j + 2.0) * (j + 2.0 * s + 1.0);
  return {(a + b * (j + s + 1.0)) / denominator, (4.0 * (2.0 * j + 2.0 * s - W + 1.0) - b * b) / (4.0 * denominator)};
}

double termination_energy(int n, double gamma, double b) {
  require_degree(n);
  return 2.0 * (n + std::abs(gamma) + 1.0) - 0.25 * b * b;
}

Rational termination_energy(int n, const Rational& gamma, const Rational& b) {
  require_degree(n);
  Rational w = Rational(2) * (Rational(n + 1) + abs(gamma)) - b * b / 4;
  w.canonicalize();
  return w;
}

double simplified_B(int j, int n, double s) { return 2.0 * (j - n) / ((j + 2.0) * (j + 2.0 * s + 1.0)); }

std::vector<double> three_term_coefficients(double s, double a, double b, double W, int count) {
  if (count < 1) throw ArgumentError("coefficient count must be at least 1");
  std::vector<double> c{1.0};
  double previous = 0.0;  // c_{-1}
  for (int j = -1; static_cast<int>(c.size()) < count; ++j) {
    const auto [A, B] = recurrence_step(j, s, a, b, W);
    const double next = A * c.back() + B * previous;
    previous = c.back();
    c.push_back(next);
  }
  return c;
}

double second_condition_value(int n, double gamma, double a, double b) {
  require_degree(n);
  return three_term_coefficients(exponent(gamma), a, b, termination_energy(n, gamma, b), n + 2).back();
}

double CoefficientPolynomial::operator()(double a) const {
  std::vector<long double> asc;
  asc.reserve(poly.size());
  for (const auto& c : poly) asc.push_back(static_cast<long double>(c.get_d()));
  return static_cast<double>(horner(asc, a, nullptr));
}

std::vector<double> CoefficientPolynomial::monic() const {
  std::vector<double> out;
  out.reserve(poly.size());
  const Rational& lead = poly.back();
  for (const auto& c : poly) {
    Rational q = c / lead;
    out.push_back(q.get_d());
  }
  return out;
}

CoefficientPolynomial coefficient_polynomial(int n, const Rational& gamma, const Rational& b) {
  require_degree(n);
  const Rational s = abs(gamma) + Rational(1, 2);
  const Rational W = termination_energy(n, gamma, b);

  RationalPoly before{Rational(0)};  // c_{j}
  RationalPoly current{Rational(1)};  // c_{j+1}
  for (int j = -1; j < n; ++j) {
    const Rational denominator = Rational(j + 2) * (Rational(j + 1) + 2 * s);
    // A_j = (a + b (j + s + 1)) / denominator
    const Rational alpha = b * (Rational(j + 1) + s) / denominator;
    const Rational beta = Rational(1) / denominator;
    const Rational B = (Rational(4) * (Rational(2 * j + 1) + 2 * s - W) - b * b) / (Rational(4) * denominator);
    RationalPoly next = add(multiply_linear(current, alpha, beta), scale(before, B));
    before = std::move(current);
    current = std::move(next);
  }
  while (current.size() > 1 && current.back() == 0) current.pop_back();

  CoefficientPolynomial out;
  out.n = n;
  out.gamma = gamma.get_d();
  out.b = b.get_d();
  out.poly = std::move(current);
  if (out.degree() != n + 1) {
    throw ConsistencyError("second-condition polynomial has degree " + std::to_string(out.degree()) +
                           ", expected " + std::to_string(n + 1));
  }
  return out;
}

CoefficientPolynomial coefficient_polynomial(int n, double gamma, double b) {
  auto out = coefficient_polynomial(n, to_rational(gamma), to_rational(b));
  out.gamma = gamma;
  out.b = b;
  return out;
}

namespace {
void finish_certificate(RootCertificate& cert, const std::vector<long double>& asc_long);
}  // namespace

RootCertificate certified_real_roots(const std::vector<double>& ascending) {
  std::vector<double> asc(ascending);
  while (asc.size() > 1 && asc.back() == 0.0) asc.pop_back();
  const int degree = static_cast<int>(asc.size()) - 1;
  RootCertificate cert;
  if (degree < 1) return cert;

  const double lead = asc.back();
  for (double& c : asc) c /= lead;

  // Substitute a = sigma x so that the companion matrix is roughly balanced.
  double sigma = 0.0;
  for (int k = 0; k < degree; ++k) {
    if (asc[k] != 0.0) sigma = std::max(sigma, std::pow(std::abs(asc[k]), 1.0 / (degree - k)));
  }
  if (!(sigma > 0.0)) sigma = 1.0;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int k = 0; k < degree; ++k) companion(k, degree - 1) = -asc[k] / std::pow(sigma, degree - k);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw ConsistencyError("companion-matrix eigensolver did not converge");

  std::vector<long double> asc_long(asc.begin(), asc.end());
  for (int k = 0; k < degree; ++k) {
    const std::complex<double> z = solver.eigenvalues()[k] * sigma;
    const double relative_imag = std::abs(z.imag()) / (1.0 + std::abs(z));
    cert.max_relative_imag = std::max(cert.max_relative_imag, relative_imag);
    if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "root " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
          << "i is not real within 1e-9 relative";
      throw ConsistencyError(msg.str());
    }
    cert.roots.push_back(polish(asc_long, z.real()));
  }
  finish_certificate(cert, asc_long);
  return cert;
}

namespace {

void finish_certificate(RootCertificate& cert, const std::vector<long double>& asc_long) {
  std::sort(cert.roots.begin(), cert.roots.end(), std::greater<>());
  for (double r : cert.roots) {
    cert.max_polished_residual = std::max(cert.max_polished_residual, relative_residual(asc_long, r));
  }
  for (std::size_t i = 0; i + 1 < cert.roots.size(); ++i) {
    if (cert.roots[i] - cert.roots[i + 1] <= 1e-8) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "roots " << i + 1 << " and " << i + 2 << " coincide within 1e-8 near " << cert.roots[i]
          << " (multiplicity > 1)";
      cert.warnings.push_back(msg.str());
    }
  }
}

// With W = W^(n) the recurrence reads
//   a c_k = (k+1)(k+2s) c_{k+1} - b(k+s) c_k + 2(n+1-k) c_{k-1},
// so c_{n+1}(a) = 0 is the eigenproblem of a tridiagonal matrix whose
// off-diagonal products are positive. Its symmetrization has the same
// eigenvalues, which are therefore real.
std::vector<double> jacobi_roots(int n, double s, double b) {
  const auto size = static_cast<lapack_int>(n + 1);
  std::vector<double> d(static_cast<std::size_t>(size)), e(static_cast<std::size_t>(std::max<lapack_int>(size - 1, 1)));
  for (int k = 0; k <= n; ++k) d[k] = -b * (k + s);
  for (int k = 0; k < n; ++k) e[k] = std::sqrt(2.0 * (k + 1.0) * (k + 2.0 * s) * (n - k));
  if (LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', size, d.data(), e.data(), nullptr, 1) != 0) {
    throw ConsistencyError("tridiagonal eigensolver for the second condition did not converge");
  }
  return d;
}

}  // namespace

RootCertificate admissible_a_certified(int n, double gamma, double b) {
  const auto poly = coefficient_polynomial(n, gamma, b);
  RootCertificate cert;
  try {
    cert = certified_real_roots(poly.monic());
  } catch (const ConsistencyError& companion_failure) {
    // High degrees make the companion matrix too ill-conditioned to resolve
    // real roots. Fall back to the symmetric form, which is real by construction.
    const auto monic = poly.monic();
    const std::vector<long double> asc_long(monic.begin(), monic.end());
    RootCertificate fallback;
    for (double x : jacobi_roots(n, exponent(gamma), b)) {
      const double polished = polish(asc_long, x);
      fallback.roots.push_back(std::abs(polished - x) <= 1e-6 * (1.0 + std::abs(x)) ? polished : x);
    }
    finish_certificate(fallback, asc_long);
    fallback.warnings.insert(fallback.warnings.begin(),
                             std::string("companion matrix rejected (") + companion_failure.what() +
                                 "); roots taken from the symmetric tridiagonal form");
    cert = std::move(fallback);
  }
  if (static_cast<int>(cert.roots.size()) != n + 1) {
    throw ConsistencyError("expected " + std::to_string(n + 1) + " real roots, found " +
                           std::to_string(cert.roots.size()));
  }
  return cert;
}

std::vector<double> admissible_a(int n, double gamma, double b) { return admissible_a_certified(n, gamma, b).roots; }

ConditionalFamily conditional_family(int n, double gamma, double b) {
  auto cert = admissible_a_certified(n, gamma, b);
  ConditionalFamily family;
  family.n = n;
  family.gamma = gamma;
  family.b = b;
  family.W = termination_energy(n, gamma, b);
  family.warnings = std::move(cert.warnings);
  const double s = exponent(gamma);
  // Coefficients are built in exact arithmetic from the double-rounded root, so
  // the only remaining error is the rounding of a itself.
  const Rational s_exact = abs(to_rational(gamma)) + Rational(1, 2);
  const Rational b_exact = to_rational(b);
  const Rational W_exact = termination_energy(n, to_rational(gamma), b_exact);
  for (double a : cert.roots) {
    const Rational a_exact = to_rational(a);
    std::vector<double> c{1.0};
    Rational before(0), current(1);
    for (int j = -1; static_cast<int>(c.size()) < n + 3; ++j) {
      const Rational denominator = Rational(j + 2) * (Rational(j + 1) + 2 * s_exact);
      const Rational A = (a_exact + b_exact * (Rational(j + 1) + s_exact)) / denominator;
      const Rational B = (4 * (Rational(2 * j + 1) + 2 * s_exact - W_exact) - b_exact * b_exact) / (4 * denominator);
      Rational next = A * current + B * before;
      next.canonicalize();
      before = current;
      current = next;
      c.push_back(current.get_d());
    }
    double size = 0.0;
    for (int j = 0; j <= n; ++j) size = std::max(size, std::abs(c[j]));
    const double tail = std::max(std::abs(c[n + 1]), std::abs(c[n + 2]));
    if (tail > 1e-9 * size) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "series does not truncate at degree " << n << " for a = " << a << ": |c_{n+1}|, |c_{n+2}| up to "
          << tail << " against max |c_j| = " << size;
      throw ConsistencyError(msg.str());
    }
    c.resize(static_cast<std::size_t>(n) + 1);
    family.roots.push_back(a);
    family.solutions.push_back(PolynomialSolution{s, 0.5 * b, std::move(c), family.W, 1});
  }
  return family;
}

ClosedFormReport closed_form_check_n01(double gamma, double b, double tolerance) {
  ClosedFormReport report;
  auto compare = [&](const std::string& what, double got, double expected) {
    const double deviation = std::abs(got - expected) / (1.0 + std::abs(expected));
    report.max_deviation = std::max(report.max_deviation, deviation);
    if (!(deviation <= tolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << what << ": got " << got << ", closed form " << expected;
      report.mismatches.push_back(msg.str());
      report.passed = false;
    }
  };

  const double s = exponent(gamma);
  const double root = std::sqrt(b * b + 16.0 * s);

  // n = 0
  const auto p0 = coefficient_polynomial(0, gamma, b).monic();
  compare("n=0 polynomial constant term", p0[0], b * s);
  const auto f0 = conditional_family(0, gamma, b);
  compare("n=0 root", f0.roots.at(0), -b * s);
  compare("n=0 W", f0.W, 2.0 * s + 1.0 - 0.25 * b * b);
  if (f0.solutions.at(0).coeffs.size() != 1) {
    report.passed = false;
    report.mismatches.push_back("n=0 solution is not a bare prefactor");
  } else {
    compare("n=0 c_0", f0.solutions[0].coeffs[0], 1.0);
  }

  // n = 1
  const auto p1 = coefficient_polynomial(1, gamma, b).monic();
  compare("n=1 quadratic constant term", p1[0], b * b * s * (s + 1.0) - 4.0 * s);
  compare("n=1 quadratic linear term", p1[1], b * (2.0 * s + 1.0));
  const auto f1 = conditional_family(1, gamma, b);
  compare("n=1 root 1", f1.roots.at(0), 0.5 * (root - b * (2.0 * s + 1.0)));
  compare("n=1 root 2", f1.roots.at(1), -0.5 * (root + b * (2.0 * s + 1.0)));
  compare("n=1 W", f1.W, 2.0 * s + 3.0 - 0.25 * b * b);
  compare("n=1 root 1 c_1", f1.solutions.at(0).coeffs.at(1), (root - b) / (4.0 * s));
  compare("n=1 root 2 c_1", f1.solutions.at(1).coeffs.at(1), -(root + b) / (4.0 * s));
  return report;
}

}  // namespace frobenius
