#include "gravtritter/serialization.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gravtritter/error.hpp"

namespace gravtritter {
namespace {

const Json& require(const Json& object, const char* key, const std::string& context) {
  const auto it = object.find(key);
  if (it == object.end()) throw SchemaError(fmt::format("{}: missing key \"{}\"", context, key));
  return *it;
}

std::string require_string(const Json& object, const char* key, const std::string& context) {
  const Json& v = require(object, key, context);
  if (!v.is_string()) throw SchemaError(fmt::format("{}: \"{}\" must be a string", context, key));
  return v.get<std::string>();
}

std::vector<double> number_array(const Json& v, const std::string& context) {
  if (!v.is_array()) throw SchemaError(fmt::format("{}: expected an array of numbers", context));
  std::vector<double> out;
  out.reserve(v.size());
  for (const Json& x : v) {
    if (!x.is_number()) throw SchemaError(fmt::format("{}: expected an array of numbers", context));
    out.push_back(x.get<double>());
  }
  return out;
}

Complex complex_from_json(const Json& j, const std::string& context) {
  const std::vector<double> pair = number_array(j, context);
  if (pair.size() != 2) throw SchemaError(fmt::format("{}: complex entries are [re, im]", context));
  return {pair[0], pair[1]};
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

void require_only_keys(const Json& object, std::initializer_list<const char*> allowed,
                       const std::string& context) {
  if (!object.is_object()) throw SchemaError(fmt::format("{}: expected a JSON object", context));
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw SchemaError(fmt::format("{}: unknown key \"{}\"", context, item.key()));
  }
}

double require_number(const Json& object, const char* key, const std::string& context) {
  const Json& v = require(object, key, context);
  if (!v.is_number()) throw SchemaError(fmt::format("{}: \"{}\" must be a number", context, key));
  return v.get<double>();
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json profile_to_json(const ModeProfile& profile) {
  if (const auto* g = std::get_if<GaussianShape>(&profile.shape()))
    return {{"kind", "gaussian"}, {"omega0", g->omega0}, {"sigma", g->sigma}, {"phase", g->phase}};
  if (const auto* c = std::get_if<CombShape>(&profile.shape())) {
    Json peaks = Json::array();
    for (const CombLobe& lobe : c->lobes)
      peaks.push_back({lobe.weight.real(), lobe.weight.imag(), lobe.center, lobe.width});
    return {{"kind", "comb"}, {"peaks", peaks}};
  }
  const auto& t = std::get<TabulatedShape>(profile.shape());
  Json re = Json::array(), im = Json::array();
  for (const Complex& v : t.value) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return {{"kind", "tabulated"}, {"omega", t.omega}, {"re", re}, {"im", im}};
}

ModeProfile profile_from_json(const Json& j, const QuadratureOptions& options) {
  const std::string ctx = "profile";
  if (!j.is_object()) throw SchemaError("profile: expected a JSON object");
  const std::string kind = require_string(j, "kind", ctx);
  if (kind == "gaussian") {
    require_only_keys(j, {"kind", "omega0", "sigma", "phase"}, ctx);
    const double phase = j.contains("phase") ? require_number(j, "phase", ctx) : 0.0;
    return ModeProfile::gaussian(require_number(j, "omega0", ctx), require_number(j, "sigma", ctx), phase);
  }
  if (kind == "comb") {
    require_only_keys(j, {"kind", "peaks"}, ctx);
    const Json& peaks = require(j, "peaks", ctx);
    if (!peaks.is_array()) throw SchemaError("profile: \"peaks\" must be an array");
    std::vector<CombLobe> lobes;
    for (const Json& p : peaks) {
      const std::vector<double> v = number_array(p, "profile.peaks");
      if (v.size() != 4) throw SchemaError("profile: comb peaks are [re, im, center, width]");
      lobes.push_back({{v[0], v[1]}, v[2], v[3]});
    }
    return make_comb(lobes, options);
  }
  if (kind == "tabulated") {
    require_only_keys(j, {"kind", "omega", "re", "im"}, ctx);
    std::vector<double> omega = number_array(require(j, "omega", ctx), "profile.omega");
    const std::vector<double> re = number_array(require(j, "re", ctx), "profile.re");
    const std::vector<double> im = number_array(require(j, "im", ctx), "profile.im");
    if (re.size() != omega.size() || im.size() != omega.size())
      throw SchemaError("profile: omega, re and im must have equal length");
    std::vector<Complex> value(omega.size());
    for (std::size_t i = 0; i < value.size(); ++i) value[i] = {re[i], im[i]};
    const ModeProfile raw = ModeProfile::tabulated(std::move(omega), std::move(value), false);
    const double n = norm(raw, options);
    if (!(n > 0.0)) throw DomainError("profile: tabulated profile has zero norm");
    return raw.scaled(1.0 / n, true);
  }
  throw SchemaError(fmt::format("profile: unknown kind \"{}\"", kind));
}

Json matrix_to_json(const MixerMatrix& u) {
  Json rows = Json::array();
  for (int r = 0; r < 3; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 3; ++c) row.push_back(complex_to_json(u(r, c)));
    rows.push_back(row);
  }
  return rows;
}

MixerMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw SchemaError("matrix: expected 3 rows");
  MixerMatrix u;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) throw SchemaError("matrix: expected 3 columns");
    for (int c = 0; c < 3; ++c) u(r, c) = complex_from_json(j[r][c], "matrix");
  }
  return u;
}

Json angles_to_json(const TritterAngles& a) { return {{"theta", a.theta}, {"phi", a.phi}, {"psi", a.psi}}; }

TritterAngles angles_from_json(const Json& j) {
  require_only_keys(j, {"theta", "phi", "psi"}, "angles");
  return {require_number(j, "theta", "angles"), require_number(j, "phi", "angles"),
          require_number(j, "psi", "angles")};
}

Json state_to_json(const FockState& state) {
  Json amplitudes = Json::array();
  for (std::size_t i = 0; i < state.occupations().size(); ++i) {
    const Complex a = state.amplitudes()[i];
    amplitudes.push_back({{"occupation", state.occupations()[i]}, {"re", a.real()}, {"im", a.imag()}});
  }
  return {{"total", state.total()}, {"amplitudes", amplitudes}};
}

Json density_to_json(const TwoModeDensityMatrix& rho) {
  const int d = rho.n_max() + 1;
  Json basis = Json::array();
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) basis.push_back(fmt::format("{}{}", n, m));
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < rho.dim(); ++c) row.push_back(complex_to_json(rho.matrix()(r, c)));
    entries.push_back(row);
  }
  return {{"n_max", rho.n_max()}, {"basis", basis}, {"entries", entries}};
}

StaticSchwarzschildConfig schwarzschild_from_json(const Json& j) {
  require_only_keys(j, {"r_s", "r_A", "r_B"}, "geometry");
  return {require_number(j, "r_s", "geometry"), require_number(j, "r_A", "geometry"),
          require_number(j, "r_B", "geometry")};
}

Json sweep_row_to_json(const SweepRow& r) {
  return {{"parameter", number_or_null(r.parameter)}, {"chi", number_or_null(r.chi)},
          {"theta", number_or_null(r.angles.theta)},  {"phi", number_or_null(r.angles.phi)},
          {"psi", number_or_null(r.angles.psi)},      {"hom_coeff", number_or_null(r.hom_coefficient)},
          {"rho2020", number_or_null(r.rho2020)},     {"rho0202", number_or_null(r.rho0202)},
          {"rho1111", number_or_null(r.rho1111)},     {"negativity", number_or_null(r.negativity)},
          {"neg_bound", number_or_null(r.neg_bound)}, {"status", r.status}};
}

ModeFamily family_from_json(const Json& j, const QuadratureOptions& options) {
  const std::string ctx = "family";
  if (!j.is_object()) throw SchemaError("family: expected a JSON object");
  const std::string kind_name = require_string(j, "kind", ctx);
  const auto kind = parse_family_kind(kind_name);
  if (!kind) throw SchemaError(fmt::format("family: unknown kind \"{}\"", kind_name));

  ModeFamily family;
  family.kind = *kind;
  switch (*kind) {
    case FamilyKind::gaussian_pair:
      require_only_keys(j, {"kind", "omega0", "separation", "sigma"}, ctx);
      break;
    case FamilyKind::comb_pair:
      require_only_keys(j, {"kind", "omega0", "separation", "sigma", "peak_count", "alternate"}, ctx);
      if (j.contains("peak_count")) {
        if (!j["peak_count"].is_number_integer()) throw SchemaError("family: \"peak_count\" must be an integer");
        family.peak_count = j["peak_count"].get<int>();
      }
      if (j.contains("alternate")) {
        if (!j["alternate"].is_boolean()) throw SchemaError("family: \"alternate\" must be a boolean");
        family.alternate = j["alternate"].get<bool>();
      }
      break;
    case FamilyKind::explicit_pair: {
      require_only_keys(j, {"kind", "modes"}, ctx);
      const Json& modes = require(j, "modes", ctx);
      if (!modes.is_array() || modes.size() != 2) throw SchemaError("family: \"modes\" must hold two profiles");
      family.profiles.emplace(profile_from_json(modes[0], options), profile_from_json(modes[1], options));
      return family;
    }
    case FamilyKind::angles:
      require_only_keys(j, {"kind", "theta", "phi", "psi"}, ctx);
      family.angles = {require_number(j, "theta", ctx), require_number(j, "phi", ctx), require_number(j, "psi", ctx)};
      return family;
  }
  family.omega0 = require_number(j, "omega0", ctx);
  family.separation = require_number(j, "separation", ctx);
  family.sigma = require_number(j, "sigma", ctx);
  return family;
}

Json family_to_json(const ModeFamily& f) {
  switch (f.kind) {
    case FamilyKind::gaussian_pair:
      return {{"kind", "gaussian_pair"}, {"omega0", f.omega0}, {"separation", f.separation}, {"sigma", f.sigma}};
    case FamilyKind::comb_pair:
      return {{"kind", "comb_pair"},   {"omega0", f.omega0},         {"separation", f.separation},
              {"sigma", f.sigma},      {"peak_count", f.peak_count}, {"alternate", f.alternate}};
    case FamilyKind::explicit_pair:
      return {{"kind", "explicit_pair"},
              {"modes", Json::array({profile_to_json(f.profiles->first), profile_to_json(f.profiles->second)})}};
    case FamilyKind::angles:
      return {{"kind", "angles"}, {"theta", f.angles.theta}, {"phi", f.angles.phi}, {"psi", f.angles.psi}};
  }
  return nullptr;
}

}  // namespace gravtritter
