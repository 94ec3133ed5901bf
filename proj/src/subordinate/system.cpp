#include <cmath>
#include <limits>

#include "gevrey/subordinate.hpp"

namespace gevrey {

SubordinateSystem::SubordinateSystem(int m, std::vector<SubordinateEntry> entries) : m_(m) {
  if (m < 0) throw InvalidInput("subordinate system level m must be nonnegative");
  int prev_s = -1;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& e = entries[i];
    const int k = static_cast<int>(i) + 1;
    const std::string who = "Z_" + std::to_string(k);
    if (e.s < 1 || e.s < m) throw InvalidInput("Zsys: s_" + std::to_string(k) + " must be >= max(1, m)");
    if (e.s < prev_s) throw InvalidInput("Zsys: s_k must be nondecreasing (s_" + std::to_string(k) + ")");
    prev_s = e.s;
    if (e.Z.k() > e.s) throw InvalidInput("Zsys: " + who + " uses z beyond s_" + std::to_string(k));
    if (e.Z.ell() > k - 1) throw InvalidInput("Zsys: " + who + " uses zeta_j with j >= " + std::to_string(k));
    e.Z.embed(e.s, k - 1);
    PlusDecomposition d = is_plus_class(e.Z, m);
    if (!d.ok) throw InvalidInput(d.reason + " (" + who + ")");
  }
  entries_ = std::move(entries);

  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ScalarSum& Z = entries_[i].Z;
    ScalarSum w = op_R(Z);
    for (std::size_t j = 0; j < i; ++j) w += multiply(W_[j], dzeta(Z, static_cast<int>(j) + 1));
    w.embed(entries_[i].s, static_cast<int>(i));
    std::string why;
    if (!in_class(w, 0, Rational(-1), &why) || !is_real_symmetric(w))
      throw ClassError("Wlem: W_" + std::to_string(i + 1) + " left its class: " + (why.empty() ? "not real-symmetric" : why));
    W_.push_back(std::move(w));
  }
  find_T_min();
}

void SubordinateSystem::fill_zeta(EvalPoint& pt) const {
  pt.zeta.clear();
  pt.log_zeta.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    cd v = evaluate(entries_[i].Z, pt);
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v)))
      throw ClassError("Y_" + std::to_string(i + 1) + " has a nonzero imaginary part");
    if (!(v.real() > 0.0))
      throw DomainError("Y_" + std::to_string(i + 1) + " is not positive at this time");
    pt.zeta.push_back(v.real());
    pt.log_zeta.push_back(std::log(v.real()));
  }
}

EvalPoint SubordinateSystem::point(const LevelTime& t, int k, bool check) const {
  if (check && !entries_.empty() && t < T_min_)
    throw DomainError("evaluation below T_min (t = " + std::to_string(t.t()) + ")");
  EvalPoint pt = log_point(t, std::max(k, s_max()));
  fill_zeta(pt);
  return pt;
}

std::vector<double> SubordinateSystem::eval_Y(const LevelTime& t) const { return point(t, 0).zeta; }

bool SubordinateSystem::admissible(const LevelTime& t) const {
  try {
    EvalPoint pt = point(t, 0, false);
    for (double y : pt.zeta)
      if (y < 0.5) return false;
    return true;
  } catch (const DomainError&) {
    return false;
  } catch (const OverflowError&) {
    return false;
  }
}

void SubordinateSystem::find_T_min() {
  if (entries_.empty()) {
    T_min_ = LevelTime{0, 0.0};
    return;
  }
  const int lev = std::max(0, s_max() - 4);
  const double lb = iterated_exp(s_max() - lev, 0.0);
  std::vector<double> cand;
  for (int i = -8; i <= 308; ++i) {
    double v = lb + std::pow(10.0, i);
    if (!std::isfinite(v)) break;
    if (v > lb && (cand.empty() || v > cand.back())) cand.push_back(v);
  }
  int last_fail = -1;
  for (std::size_t i = 0; i < cand.size(); ++i)
    if (!admissible(LevelTime{lev, cand[i]})) last_fail = static_cast<int>(i);
  if (last_fail + 1 >= static_cast<int>(cand.size()))
    throw InvalidInput("Zsys: no time found at which every Y_k >= 1/2");
  if (last_fail < 0) {
    T_min_ = LevelTime{lev, cand.front()};
    return;
  }
  double lo = cand[static_cast<std::size_t>(last_fail)], hi = cand[static_cast<std::size_t>(last_fail) + 1];
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (admissible(LevelTime{lev, mid}) ? hi : lo) = mid;
  }
  T_min_ = LevelTime{lev, hi};
}

}  // namespace gevrey
