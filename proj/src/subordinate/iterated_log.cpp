#include <cmath>
#include <limits>

#include "gevrey/subordinate.hpp"

namespace gevrey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string level_name(int m) { return "L_" + std::to_string(m); }

}  // namespace

double iterated_exp(int m, double x) {
  if (m < 0) throw InvalidInput("iterated_exp: negative order");
  for (int i = 0; i < m; ++i) {
    x = std::exp(x);
    if (std::isinf(x)) return kInf;
  }
  return x;
}

double iterated_log(int m, double t) {
  if (m < -1) throw InvalidInput("iterated_log: order below -1");
  if (m == -1) return std::exp(t);
  double x = t;
  for (int i = 1; i <= m; ++i) {
    if (!(x > 0.0))
      throw DomainError(level_name(m) + "(t) undefined: need t > E_" + std::to_string(m - 1) +
                        "(0) = " + std::to_string(iterated_exp(m - 1)));
    x = std::log(x);
  }
  return x;
}

double LevelTime::log_level(int m) const {
  if (m < -1) throw InvalidInput("log_level: order below -1");
  double x = value;
  if (m >= level) {
    for (int i = level + 1; i <= m; ++i) {
      if (std::isinf(x)) return kInf;
      if (!(x > 0.0))
        throw DomainError(level_name(m) + " undefined at this time (" + level_name(i - 1) +
                          " = " + std::to_string(x) + " <= 0)");
      x = std::log(x);
    }
    return x;
  }
  for (int i = level - 1; i >= m; --i) {
    x = std::exp(x);
    if (std::isinf(x)) return kInf;
  }
  return x;
}

double LevelTime::t() const { return log_level(0); }

bool LevelTime::operator<(const LevelTime& o) const {
  int lev = std::max(level, o.level);
  return log_level(lev) < o.log_level(lev);
}

EvalPoint log_point(const LevelTime& t, int k) {
  EvalPoint pt;
  pt.log_z.resize(static_cast<std::size_t>(k + 2));
  for (int j = -1; j <= k; ++j) pt.log_z[static_cast<std::size_t>(j + 1)] = t.log_level(j + 1);
  return pt;
}

}  // namespace gevrey
