#include "gevrey/lattice.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "gevrey/error.hpp"

namespace gevrey {

int ExponentLattice::index_of(const Rational& x) const {
  auto it = std::lower_bound(mu.begin(), mu.end(), x);
  if (it == mu.end() || !(*it == x)) return -1;
  return static_cast<int>(it - mu.begin());
}

std::vector<std::pair<int, int>> ExponentLattice::pair_sums(int n) const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    int j = index_of(mu[static_cast<std::size_t>(n)] - mu[static_cast<std::size_t>(i)]);
    if (j >= 0 && j < n) out.emplace_back(i, j);
  }
  return out;
}

int ExponentLattice::valid_count() const {
  int n = 0;
  for (const auto& x : mu) {
    if (x + x > cutoff) break;
    if (m_star == 0 && x + Rational(1) > cutoff) break;
    ++n;
  }
  return n;
}

ExponentLattice build_lattice(const std::vector<Rational>& generators, int m_star, const Rational& cutoff,
                              std::size_t max_count) {
  if (generators.empty()) throw InvalidInput("lattice: at least one generator is required");
  if (m_star < 0) throw InvalidInput("lattice: m_* must be nonnegative");
  Rational gmax = generators.front();
  for (const auto& g : generators) {
    if (g.sign() <= 0) throw InvalidInput("lattice: generators must be positive (got " + g.str() + ")");
    gmax = std::max(gmax, g);
  }
  if (cutoff < gmax) throw InvalidInput("lattice: cutoff " + cutoff.str() + " is below the largest generator");

  std::set<Rational> seen;
  std::deque<Rational> work;
  auto push = [&](const Rational& x) {
    if (x > cutoff || !seen.insert(x).second) return;
    if (seen.size() > max_count)
      throw InvalidInput("lattice: more than " + std::to_string(max_count) + " exponents below cutoff " + cutoff.str());
    work.push_back(x);
  };
  for (const auto& g : generators) push(g);
  while (!work.empty()) {
    Rational x = work.front();
    work.pop_front();
    for (const auto& g : generators) push(x + g);
    if (m_star == 0) push(x + Rational(1));
  }
  ExponentLattice L;
  L.m_star = m_star;
  L.generators = generators;
  std::sort(L.generators.begin(), L.generators.end());
  L.generators.erase(std::unique(L.generators.begin(), L.generators.end()), L.generators.end());
  L.cutoff = cutoff;
  L.mu.assign(seen.begin(), seen.end());
  return L;
}

}  // namespace gevrey
