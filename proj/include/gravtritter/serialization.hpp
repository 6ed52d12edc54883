#pragma once

#include <initializer_list>
#include <string>

#include "json.hpp"

#include "gravtritter/fock.hpp"
#include "gravtritter/geometry.hpp"
#include "gravtritter/modes.hpp"
#include "gravtritter/search.hpp"
#include "gravtritter/tritter.hpp"

namespace gravtritter {

using Json = nlohmann::json;

/// Throws SchemaError when `object` is not a JSON object or has a key
/// outside `allowed`. `context` prefixes the message.
void require_only_keys(const Json& object, std::initializer_list<const char*> allowed,
                       const std::string& context);

double require_number(const Json& object, const char* key, const std::string& context);

/// Profiles:
///   {"kind":"gaussian","omega0":..,"sigma":..,"phase":..}
///   {"kind":"comb","peaks":[[re,im,center,width],...]}        (normalized on read)
///   {"kind":"tabulated","omega":[..],"re":[..],"im":[..]}      (normalized on read)
Json profile_to_json(const ModeProfile& profile);
ModeProfile profile_from_json(const Json& j, const QuadratureOptions& options = {});

/// Row-major [[[re,im],[re,im],[re,im]], ...].
Json matrix_to_json(const MixerMatrix& u);
MixerMatrix matrix_from_json(const Json& j);

Json angles_to_json(const TritterAngles& angles);
TritterAngles angles_from_json(const Json& j);

Json state_to_json(const FockState& state);

/// {"n_max":..,"basis":["00","01",..],"entries":[[[re,im],..],..]}.
Json density_to_json(const TwoModeDensityMatrix& rho);

Json complex_to_json(Complex z);

/// Accepts {"r_s","r_A","r_B"}.
StaticSchwarzschildConfig schwarzschild_from_json(const Json& j);

Json sweep_row_to_json(const SweepRow& row);

/// {"kind":"gaussian_pair"|"comb_pair", "omega0","separation","sigma"[,"peak_count","alternate"]}
/// {"kind":"explicit_pair","modes":[profile, profile]}
/// {"kind":"angles","theta","phi","psi"}
ModeFamily family_from_json(const Json& j, const QuadratureOptions& options = {});
Json family_to_json(const ModeFamily& family);

}  // namespace gravtritter
