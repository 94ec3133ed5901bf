#pragma once

#include <functional>

#include "gevrey/field_io.hpp"
#include "gevrey/ple.hpp"

namespace gevrey {

/// [num, den]; reading also accepts an integer or a string "n/d".
json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

/// [[re_num, re_den], [im_num, im_den]].
json exponent_to_json(const ExactComplex& e);
/// Accepts the pair form, an integer, or a string such as "-1/3", "2i", "1/2-3/4i".
ExactComplex exponent_from_json(const json& j);
ExactComplex parse_exponent(const std::string& s);

json monomial_to_json(const Monomial& m);
/// Accepts full "beta"/"gamma" arrays or sparse "z"/"zeta" maps keyed by index.
Monomial monomial_from_json(const json& j);

json coef_to_json(const cd& c);
cd coef_from_json(const json& j);

json sum_to_json(const ScalarSum& p);
json sum_to_json(const FieldSum& p);
ScalarSum scalar_sum_from_json(const json& j);

using FieldResolver = std::function<SpectralField(const json& xi)>;
FieldSum field_sum_from_json(const json& j, const FieldResolver& resolve);

}  // namespace gevrey
