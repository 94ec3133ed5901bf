#pragma once

#include <stdexcept>
#include <string>

namespace gevrey {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

/// Evaluation outside the domain of an iterated logarithm or below T_min.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Gevrey weight or an evaluated power exceeded the representable range.
class OverflowError : public Error {
public:
  using Error::Error;
};

/// Exact rational arithmetic left the 64-bit range.
class RationalOverflow : public Error {
public:
  using Error::Error;
};

/// A sum failed a class-membership or symmetry requirement.
class ClassError : public Error {
public:
  using Error::Error;
};

/// A convolution produced energy outside the admitted support box.
class SupportCapOverflow : public Error {
public:
  SupportCapOverflow(int cap, int required, double dropped_norm, const std::string& context)
      : Error("support cap overflow" + (context.empty() ? std::string() : " (" + context + ")") +
              ": band |k_i| in (" + std::to_string(cap) + ", " + std::to_string(required) +
              "] dropped with Gevrey norm " + std::to_string(dropped_norm)),
        cap_(cap), required_(required), dropped_norm_(dropped_norm) {}

  int cap() const { return cap_; }
  int required() const { return required_; }
  double dropped_norm() const { return dropped_norm_; }

private:
  int cap_;
  int required_;
  double dropped_norm_;
};

/// Solver blew up; carries the last time at which the state was finite.
class DivergenceError : public Error {
public:
  DivergenceError(double last_t, const std::string& what)
      : Error(what + " (last valid t = " + std::to_string(last_t) + ")"), last_t_(last_t) {}
  double last_valid_t() const { return last_t_; }

private:
  double last_t_;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace gevrey
