#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "gevrey/subordinate.hpp"

namespace gevrey {

IntegralBoundResult check_integral_bound(int m, double lambda, double gamma, double T_star,
                                         const std::vector<double>& t_grid) {
  if (m < 0) throw InvalidInput("integral bound: m must be nonnegative");
  if (!(lambda > 0.0) || !(gamma > 0.0)) throw InvalidInput("integral bound: lambda and gamma must be positive");
  if (!(T_star > iterated_exp(m, 0.0))) throw InvalidInput("integral bound: T_* must exceed E_m(0)");
  using boost::math::quadrature::gauss_kronrod;
  IntegralBoundResult res;
  for (double t : t_grid) {
    if (t < 0.0) throw InvalidInput("integral bound: negative grid time");
    if (t == 0.0) {
      res.ratios.push_back(0.0);
      continue;
    }
    auto f = [&](double tau) { return std::exp(-gamma * (t - tau) - lambda * std::log(iterated_log(m, T_star + tau))); };
    // Pieces of width ~1/γ concentrate the nodes where the kernel lives.
    double total = 0.0, err_total = 0.0;
    const double w = 4.0 / gamma;
    double b = t;
    while (b > 0.0) {
      double a = std::max(0.0, b - w);
      double err = 0.0;
      double piece = gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-13, &err);
      total += piece;
      err_total += err;
      if (piece < 1e-18 * total) break;
      b = a;
      if (t - b > 60.0 / gamma && b > 0.0) {
        // Remaining mass is below e^{-60} of the peak; integrate it in one piece.
        total += gauss_kronrod<double, 61>::integrate(f, 0.0, b, 12, 1e-10, &err);
        err_total += err;
        break;
      }
    }
    if (!(err_total <= 1e-8 * std::abs(total) + 1e-300))
      throw Error("integral bound: quadrature did not converge at t = " + std::to_string(t));
    res.ratios.push_back(total * std::pow(iterated_log(m, T_star + t), lambda));
  }
  for (double r : res.ratios) res.max_ratio = std::max(res.max_ratio, r);
  if (!res.ratios.empty()) res.last_ratio = res.ratios.back();
  return res;
}

}  // namespace gevrey
