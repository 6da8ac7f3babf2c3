#include "frobenius/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "frobenius/errors.hpp"

namespace frobenius {

Rational to_rational(double x) {
  if (!std::isfinite(x)) {
    throw ArgumentError("cannot represent a non-finite value as a rational");
  }
  Rational r(x);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Rational {
    throw ArgumentError("not a rational number: '" + original + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return fail();

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational value;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    const mpz_class n{std::string(num), 10};
    const mpz_class d{std::string(den), 10};
    if (d == 0) return fail();
    value = Rational(n, d);
    value.canonicalize();
  } else {
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_text = text.substr(e + 1);
      text = text.substr(0, e);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) return fail();
      exponent = std::strtol(std::string(exp_text).c_str(), nullptr, 10);
      if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      const auto whole = text.substr(0, dot);
      const auto frac = text.substr(dot + 1);
      if (whole.empty() && frac.empty()) return fail();
      if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) return fail();
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    } else {
      if (!all_digits(text)) return fail();
      digits = std::string(text);
    }
    value = Rational(mpz_class(digits, 10)) * pow10(exponent);
    value.canonicalize();
  }
  return negative ? Rational(-value) : value;
}

Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace frobenius
