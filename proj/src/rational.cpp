#include "xcop/rational.hpp"

#include "xcop/errors.hpp"

#include <cctype>
#include <cmath>

namespace xcop {

Integer floor_int(const Rational& x) {
  Integer num = numerator(x);
  Integer den = denominator(x);
  Integer q;
  mpz_fdiv_q(q.backend().data(), num.backend().data(), den.backend().data());
  return q;
}

Rational floor(const Rational& x) { return Rational(floor_int(x)); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot convert non-finite value to a rational");
  return Rational(x);
}

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw DomainError("malformed number '" + std::string(whole) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw DomainError("malformed number '" + std::string(whole) + "'");
    }
  }
  return Integer(std::string(digits));
}

Integer pow10(long e) {
  Integer r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw DomainError("empty number");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer p = parse_integer(s.substr(0, slash), text);
    Integer q = parse_integer(s.substr(slash + 1), text);
    if (q == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    value = Rational(p, q);
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_part = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
        exp_negative = exp_part.front() == '-';
        exp_part.remove_prefix(1);
      }
      if (exp_part.size() > 6) throw DomainError("exponent too large in '" + std::string(text) + "'");
      exponent = parse_integer(exp_part, text).convert_to<long>();
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    long frac_digits = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view int_part = s.substr(0, dot);
      std::string_view frac_part = s.substr(dot + 1);
      if (int_part.empty() && frac_part.empty()) throw DomainError("malformed number '" + std::string(text) + "'");
      digits = std::string(int_part) + std::string(frac_part);
      frac_digits = static_cast<long>(frac_part.size());
    } else {
      digits = std::string(s);
    }
    Integer mantissa = parse_integer(digits, text);
    long shift = exponent - frac_digits;
    value = shift >= 0 ? Rational(mantissa * pow10(shift)) : Rational(mantissa, pow10(-shift));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

std::vector<double> to_doubles(const std::vector<Rational>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(to_double(x));
  return out;
}

}  // namespace xcop
