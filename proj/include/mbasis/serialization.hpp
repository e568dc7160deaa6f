#pragma once

#include "mbasis/biortho.hpp"
#include "mbasis/extension.hpp"
#include "mbasis/kuelbs.hpp"
#include "mbasis/norms.hpp"
#include "mbasis/report.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>

/// Structured-text (JSON) encodings. Readers reject unknown fields and throw
/// ParseError with the offending field path.
namespace mbasis::io {

using json = nlohmann::ordered_json;

/// Finite doubles as numbers; infinities as "inf" / "-inf", NaN as "nan".
json number(double v);
double number_from(const json& j, const std::string& path);

json to_json(const Vec& v);
/// One inner array per row.
json to_json(const Mat& m);
Vec vec_from_json(const json& j, const std::string& path);
Mat mat_from_json(const json& j, const std::string& path);

/// Throws ParseError naming the first key of j not in allowed.
void reject_unknown_fields(const json& j, std::initializer_list<std::string_view> allowed, const std::string& path);
const json& require_field(const json& j, const std::string& key, const std::string& path);

/// {"dim":n, "kind":"pnorm"|"weighted_pnorm"|"polyhedral", "p":..., "w":[...], "A":[[...]]}
json to_json(const NormSpec& s);
NormSpec norm_spec_from_json(const json& j, const std::string& path = "space");

/// {"space":..., "t":[...], "U":[[...]], "G":[[...]]}
json to_json(const HilbertStructure& hs);
/// G is recomputed and must match the stored one within 1e-9.
HilbertStructure hilbert_from_json(const json& j, const std::string& path = "hilbert");

/// {"space":..., "X":[[...]]}, one inner array per vector.
json to_json(const SystemOfVectors& s);
SystemOfVectors system_from_json(const json& j, const std::string& path = "system");

/// {"space":..., "X":[[...]], "F":[[...]]}
json to_json(const BiorthogonalSystem& b);
BiorthogonalSystem biorthogonal_from_json(const json& j, const std::string& path = "system");

json to_json(const AuditReport& r);

/// {"space":..., "constraints":[{"v":[...], "value":c}], "bound_scale":b}
json to_json(const ExtensionProblem& p);
ExtensionProblem extension_problem_from_json(const json& j, const std::string& path = "problem");
json to_json(const ExtensionResult& r);

}  // namespace mbasis::io
