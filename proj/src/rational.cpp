#include "tdt/rational.hpp"

#include "tdt/errors.hpp"

namespace tdt {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error(Errc::validation, "non-finite number");
  }
  return Rational(x);
}

double to_double(const Rational& r) { return static_cast<double>(r); }

std::string format_rational(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  bool negative = num < 0;
  if (negative) num = -num;

  BigInt d = den;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) {
    return (negative ? "-" : "") + num.str() + "/" + den.str();
  }
  int digits = std::max(twos, fives);
  BigInt scaled = num;
  for (int i = twos; i < digits; ++i) scaled *= 2;
  for (int i = fives; i < digits; ++i) scaled *= 5;

  std::string s = scaled.str();
  std::string out;
  if (digits == 0) {
    out = s;
  } else {
    if ((int)s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    out = s.substr(0, s.size() - digits) + "." + s.substr(s.size() - digits);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return negative ? "-" + out : out;
}

}  // namespace tdt
