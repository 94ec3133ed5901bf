#include "gevrey/field_io.hpp"

#include "gevrey/error.hpp"

namespace gevrey {

json domain_to_json(const DomainConfig& d) {
  return json{{"lengths", {d.lengths[0], d.lengths[1], d.lengths[2]}}, {"N", d.N}};
}

DomainConfig domain_from_json(const json& j) {
  Vec3d l{kTwoPi, kTwoPi, kTwoPi};
  if (j.contains("lengths")) {
    const auto& a = j.at("lengths");
    if (!a.is_array() || a.size() != 3) throw InvalidInput("domain.lengths must be a 3-element array");
    for (int i = 0; i < 3; ++i) l[i] = a[i].get<double>();
  }
  return DomainConfig::make(l, j.value("N", 8), j.value("rescale", false));
}

json field_to_json(const SpectralField& f) {
  json modes = json::array();
  for (const auto& [k, c] : f.modes()) {
    modes.push_back({{"k", {k[0], k[1], k[2]}},
                     {"re", {c[0].real(), c[1].real(), c[2].real()}},
                     {"im", {c[0].imag(), c[1].imag(), c[2].imag()}}});
  }
  return json{{"real", f.real_flag()}, {"modes", modes}};
}

SpectralField field_from_json(const json& j, const DomainConfig& d, bool validate) {
  SpectralField::Map m;
  const json& modes = j.is_array() ? j : j.at("modes");
  for (const auto& e : modes) {
    const auto& k = e.at("k");
    const auto& re = e.at("re");
    json im = e.contains("im") ? e.at("im") : json{0.0, 0.0, 0.0};
    if (k.size() != 3 || re.size() != 3 || im.size() != 3) throw InvalidInput("field mode entries need 3 components");
    WaveVector kv{k[0].get<int>(), k[1].get<int>(), k[2].get<int>()};
    if (m.count(kv)) throw InvalidInput("duplicate wavevector in field");
    m[kv] = {cd(re[0].get<double>(), im[0].get<double>()), cd(re[1].get<double>(), im[1].get<double>()),
             cd(re[2].get<double>(), im[2].get<double>())};
  }
  bool real = j.is_object() && j.value("real", false);
  if (validate) return SpectralField::from_modes(d, m, real);
  return SpectralField(d, std::move(m), real);
}

}  // namespace gevrey
