#include "gevrey/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>

#include "gevrey/error.hpp"

namespace gevrey {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw InvalidInput("rational with zero denominator");
  *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
  constexpr auto lo = std::numeric_limits<std::int64_t>::min() + 1;
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  if (n < lo || n > hi || d > hi) throw RationalOverflow("rational arithmetic overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == o.den_) return *this = from_wide(static_cast<__int128>(num_) + o.num_, den_);
  return *this = from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                           static_cast<__int128>(den_) * o.den_);
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  return *this = from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw InvalidInput("rational division by zero");
  return *this = from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 l = static_cast<__int128>(a.num_) * b.den_;
  __int128 r = static_cast<__int128>(b.num_) * a.den_;
  return l <=> r;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string ExactComplex::str() const {
  if (im.is_zero()) return re.str();
  if (re.is_zero()) return "(" + im.str() + ")i";
  return re.str() + (im.sign() > 0 ? "+" : "-") + "(" + (im.sign() > 0 ? im : -im).str() + ")i";
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }
std::ostream& operator<<(std::ostream& os, const ExactComplex& c) { return os << c.str(); }

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw InvalidInput("cannot parse rational '" + text + "'");
  }
}

}  // namespace gevrey
