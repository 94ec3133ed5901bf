#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

namespace gevrey {

/// Exact rational in lowest terms with a positive denominator.
///
/// Arithmetic is carried out in 128-bit intermediates and throws
/// RationalOverflow when a reduced result does not fit in 64 bits.
class Rational {
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
  static Rational from_wide(__int128 n, __int128 d);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Exponent with exact rational real and imaginary parts.
struct ExactComplex {
  Rational re;
  Rational im;

  constexpr ExactComplex() = default;
  constexpr ExactComplex(Rational r) : re(r) {}  // NOLINT(implicit)
  constexpr ExactComplex(Rational r, Rational i) : re(r), im(i) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  ExactComplex conj() const { return {re, -im}; }
  std::string str() const;

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  ExactComplex operator-() const { return {-re, -im}; }
  friend bool operator==(const ExactComplex&, const ExactComplex&) = default;
  friend std::strong_ordering operator<=>(const ExactComplex& a, const ExactComplex& b) {
    if (auto c = a.re <=> b.re; c != 0) return c;
    return a.im <=> b.im;
  }
};

std::ostream& operator<<(std::ostream& os, const ExactComplex& c);

Rational parse_rational(const std::string& text);

}  // namespace gevrey

template <>
struct std::hash<gevrey::Rational> {
  std::size_t operator()(const gevrey::Rational& r) const noexcept {
    return std::hash<std::int64_t>{}(r.num()) * 1000003u ^ std::hash<std::int64_t>{}(r.den());
  }
};
