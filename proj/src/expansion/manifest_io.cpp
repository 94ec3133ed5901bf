#include "gevrey/expansion.hpp"
#include "gevrey/ple_io.hpp"

namespace gevrey {

json lattice_to_json(const ExponentLattice& L) {
  json mu = json::array(), gens = json::array();
  for (const auto& x : L.mu) mu.push_back(x.str());
  for (const auto& g : L.generators) gens.push_back(g.str());
  json j{{"m_star", L.m_star}, {"generators", gens}, {"cutoff", L.cutoff.str()}, {"mu", mu},
         {"valid_count", L.valid_count()}};
  if (!L.M.empty()) {
    j["M"] = L.M;
    j["M_tilde"] = L.M_tilde;
  }
  return j;
}

json manifest_to_json(const ExpansionManifest& m) {
  json terms = json::array();
  for (int n = 0; n < static_cast<int>(m.q.size()); ++n) {
    const auto i = static_cast<std::size_t>(n);
    terms.push_back({{"n", n + 1},
                     {"mu", m.lattice.mu[i].str()},
                     {"class", {{"m", m.m_star}, {"mu", (-m.lattice.mu[i]).str()}}},
                     {"p", sum_to_json(m.p[i])},
                     {"q", sum_to_json(m.q[i])},
                     {"chi", sum_to_json(m.chi[i])}});
  }
  json checks = json::array();
  for (const auto& c : m.checks) checks.push_back({{"n", c.n}, {"item", c.item}, {"pass", c.pass}, {"detail", c.detail}});
  return json{{"schema", "gevrey-expand/manifest/1"},
              {"lattice", lattice_to_json(m.lattice)},
              {"N", m.N},
              {"m_star", m.m_star},
              {"dims", {{"k", m.k}, {"ell", m.ell}}},
              {"hat_class", "P_" + std::to_string(m.m_star) + "(" + std::to_string(m.k) + "," + std::to_string(m.ell) + ",0)"},
              {"domain", domain_to_json(m.domain)},
              {"gevrey", {{"alpha", m.gevrey.alpha}, {"sigma", m.gevrey.sigma}}},
              {"support_cap", {{"cap", m.cap}, {"policy", m.policy == CapPolicy::Error ? "error" : "truncate"},
                               {"dropped_norm", m.dropped_norm}}},
              {"real_forcing", m.real_forcing},
              {"terms", terms},
              {"class_checks", checks},
              {"build_log", m.log}};
}

}  // namespace gevrey
