#pragma once

#include <json.hpp>

#include "gevrey/spectral.hpp"

namespace gevrey {

using json = nlohmann::json;

json domain_to_json(const DomainConfig& d);
DomainConfig domain_from_json(const json& j);

/// {"real": bool, "modes": [{"k": [..], "re": [..], "im": [..]}, ...]} sorted by k.
json field_to_json(const SpectralField& f);
SpectralField field_from_json(const json& j, const DomainConfig& d, bool validate = true);

}  // namespace gevrey
