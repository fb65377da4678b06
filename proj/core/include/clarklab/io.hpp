#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "clarklab/clark.hpp"
#include "clarklab/counting.hpp"
#include "clarklab/essnorm.hpp"
#include "clarklab/measure.hpp"
#include "clarklab/modelspace.hpp"
#include "clarklab/quadrature.hpp"
#include "clarklab/symbol.hpp"

namespace clarklab::io {

using Json = nlohmann::ordered_json;

/// Version tag written into every document.
inline constexpr int kSchemaVersion = 1;

Json to_json(Complex z);  // [re, im]
Complex complex_from_json(const Json& j);

Json symbol_to_json(const Symbol& phi);
/// Throws InvalidArgumentError on malformed documents; the symbol factories
/// validate the content.
Symbol symbol_from_json(const Json& j);

Json plan_to_json(const SphereSamplePlan& plan);
SphereSamplePlan plan_from_json(const Json& j);

/// Densities are written as tags (uniform, constant, clark_ac); custom
/// closures cannot be serialized.
Json measure_to_json(const MeasureRep& mu);
MeasureRep measure_from_json(const Json& j);

Json clark_to_json(const ClarkData& data);
Json residual_to_json(const ResidualReport& r);
Json disintegration_to_json(const DisintegrationResult& r);
Json poltoratski_to_json(const PoltoratskiTable& t);
Json counting_to_json(const CountingSample& s);
Json stanton_to_json(const StantonResult& s);
Json limsup_to_json(const LimsupEstimate& e);
Json essnorm_to_json(const EssNormReport& r);
Json gram_to_json(const GramReport& r);
Json membership_to_json(const MembershipReport& r);

/// FNV-1a 64-bit hash of the compact dump, as 16 hex digits.
std::string config_hash(const Json& config);

std::string read_text_file(const std::string& path);
/// Writes atomically enough for reports: to a temporary, then renames.
void write_text_file(const std::string& path, std::string_view content);

/// A symbol given as inline JSON (starts with '{') or as a file path.
Symbol parse_symbol_argument(const std::string& arg);

}  // namespace clarklab::io
