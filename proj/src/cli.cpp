#include "gravtritter/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "gravtritter/error.hpp"
#include "gravtritter/fock.hpp"
#include "gravtritter/geometry.hpp"
#include "gravtritter/logging.hpp"
#include "gravtritter/search.hpp"
#include "gravtritter/tritter.hpp"
#include "gravtritter/version.hpp"

namespace gravtritter::cli {
namespace {

// Keys every config may carry besides its command-specific ones.
constexpr std::initializer_list<const char*> kCommonKeys = {"out", "format", "tolerances"};

std::vector<const char*> with_common(std::initializer_list<const char*> keys) {
  std::vector<const char*> all(keys);
  all.insert(all.end(), kCommonKeys.begin(), kCommonKeys.end());
  return all;
}

void check_keys(const Json& config, std::initializer_list<const char*> keys, const std::string& context) {
  if (!config.is_object()) throw SchemaError(fmt::format("{}: config must be a JSON object", context));
  const std::vector<const char*> allowed = with_common(keys);
  for (const auto& item : config.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw SchemaError(fmt::format("{}: unknown key \"{}\"", context, item.key()));
  }
  if (config.contains("format")) {
    const Json& f = config["format"];
    if (!f.is_string() || (f != "csv" && f != "json"))
      throw SchemaError(fmt::format("{}: \"format\" must be \"csv\" or \"json\"", context));
  }
  if (config.contains("out") && !config["out"].is_string())
    throw SchemaError(fmt::format("{}: \"out\" must be a string", context));
}

bool optional_bool(const Json& config, const char* key, bool fallback, const std::string& context) {
  if (!config.contains(key)) return fallback;
  if (!config[key].is_boolean()) throw SchemaError(fmt::format("{}: \"{}\" must be a boolean", context, key));
  return config[key].get<bool>();
}

int optional_int(const Json& config, const char* key, int fallback, const std::string& context) {
  if (!config.contains(key)) return fallback;
  if (!config[key].is_number_integer())
    throw SchemaError(fmt::format("{}: \"{}\" must be an integer", context, key));
  return config[key].get<int>();
}

struct Tolerances {
  QuadratureOptions quadrature;
  SweepThresholds thresholds;
  double hom_flag = 1e-6;
};

// Reads "tolerances" and writes the resolved values back into `resolved`.
Tolerances read_tolerances(const Json& config, Json& resolved, bool sweep_defaults) {
  Tolerances t;
  if (!sweep_defaults) t.thresholds.hom_tolerance = t.hom_flag;
  if (config.contains("tolerances")) {
    const Json& j = config["tolerances"];
    const std::string ctx = "tolerances";
    require_only_keys(j, {"quadrature_abs", "quadrature_max_evaluations", "hom", "population_floor",
                          "max_bisection_iterations"},
                      ctx);
    if (j.contains("quadrature_abs")) t.quadrature.abs_tolerance = require_number(j, "quadrature_abs", ctx);
    if (j.contains("quadrature_max_evaluations")) {
      const int n = optional_int(j, "quadrature_max_evaluations", 0, ctx);
      if (n <= 0) throw SchemaError("tolerances: \"quadrature_max_evaluations\" must be positive");
      t.quadrature.max_evaluations = static_cast<std::size_t>(n);
    }
    if (j.contains("hom")) t.thresholds.hom_tolerance = require_number(j, "hom", ctx);
    if (j.contains("population_floor"))
      t.thresholds.population_floor = require_number(j, "population_floor", ctx);
    t.thresholds.max_bisection_iterations =
        optional_int(j, "max_bisection_iterations", t.thresholds.max_bisection_iterations, ctx);
  }
  if (!(t.quadrature.abs_tolerance > 0.0)) throw SchemaError("tolerances: \"quadrature_abs\" must be positive");
  if (!(t.thresholds.hom_tolerance > 0.0)) throw SchemaError("tolerances: \"hom\" must be positive");
  t.hom_flag = t.thresholds.hom_tolerance;
  resolved["tolerances"] = {{"quadrature_abs", t.quadrature.abs_tolerance},
                            {"quadrature_max_evaluations", t.quadrature.max_evaluations},
                            {"hom", t.thresholds.hom_tolerance},
                            {"population_floor", t.thresholds.population_floor},
                            {"max_bisection_iterations", t.thresholds.max_bisection_iterations}};
  return t;
}

// chi from either "chi" or "geometry" ({r_s,r_A,r_B} or {g,h[,c]}).
double resolve_chi(const Json& config, const std::string& context) {
  const bool has_chi = config.contains("chi");
  const bool has_geometry = config.contains("geometry");
  if (has_chi == has_geometry)
    throw SchemaError(fmt::format("{}: give exactly one of \"chi\" or \"geometry\"", context));
  if (has_chi) return require_number(config, "chi", context);
  const Json& g = config["geometry"];
  if (g.is_object() && g.contains("r_s")) return schwarzschild_chi(schwarzschild_from_json(g));
  require_only_keys(g, {"g", "h", "c"}, "geometry");
  const double c = g.contains("c") ? require_number(g, "c", "geometry") : kSpeedOfLight;
  return weak_field_chi(require_number(g, "g", "geometry"), require_number(g, "h", "geometry"), c);
}

Json header(const char* command, const Json& resolved) {
  return {{"version", kVersion}, {"command", command}, {"config", resolved}};
}

void flatten(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& item : j.items())
      flatten(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], fmt::format("{}.{}", prefix, i), out);
  } else if (j.is_number_float()) {
    out << prefix << ',' << fmt::format("{:.17g}", j.get<double>()) << '\n';
  } else if (j.is_string()) {
    std::string s = j.get<std::string>();
    for (char& c : s)
      if (c == ',' || c == '\n') c = ';';
    out << prefix << ',' << s << '\n';
  } else {
    out << prefix << ',' << j.dump() << '\n';
  }
}

// Scalar report as "field,value" lines; the header object is the comment line.
CommandOutput scalar_output(Json report) {
  std::ostringstream csv;
  Json head = {{"version", report["version"]}, {"command", report["command"]}, {"config", report["config"]}};
  csv << "# " << head.dump() << '\n' << "field,value\n";
  Json body = report;
  body.erase("version");
  body.erase("command");
  body.erase("config");
  flatten(body, "", csv);
  return {std::move(report), csv.str()};
}

Json overlap_json(Complex z) {
  return {{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}, {"arg", std::arg(z)}};
}

std::pair<ModeProfile, ModeProfile> modes_from_config(const Json& config, bool orthonormalize,
                                                      const QuadratureOptions& q, const std::string& ctx) {
  const Json& modes = config["modes"];
  if (!modes.is_array() || modes.size() != 2)
    throw SchemaError(fmt::format("{}: \"modes\" must hold exactly two profiles", ctx));
  ModeProfile f1 = profile_from_json(modes[0], q);
  ModeProfile f2 = profile_from_json(modes[1], q);
  if (orthonormalize) return orthonormalize_pair(f1, f2, q);
  return {std::move(f1), std::move(f2)};
}

std::pair<double, double> read_range(const Json& config, const char* key, const std::string& ctx) {
  if (!config.contains(key)) throw SchemaError(fmt::format("{}: missing key \"{}\"", ctx, key));
  const Json& r = config[key];
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
    throw SchemaError(fmt::format("{}: \"{}\" must be [lo, hi]", ctx, key));
  return {r[0].get<double>(), r[1].get<double>()};
}

SweepSpec read_sweep_spec(const Json& config, Json& resolved, const std::string& ctx) {
  SweepSpec spec;
  const Tolerances tol = read_tolerances(config, resolved, true);
  spec.quadrature = tol.quadrature;
  spec.thresholds = tol.thresholds;
  if (!config.contains("family")) throw SchemaError(fmt::format("{}: missing key \"family\"", ctx));
  spec.family = family_from_json(config["family"], spec.quadrature);
  if (spec.family.kind != FamilyKind::explicit_pair) resolved["family"] = family_to_json(spec.family);
  spec.grid = optional_int(config, "grid", 11, ctx);
  const int threads = optional_int(config, "threads", 1, ctx);
  if (threads < 1) throw SchemaError(fmt::format("{}: \"threads\" must be >= 1", ctx));
  spec.threads = static_cast<unsigned>(threads);
  resolved["grid"] = spec.grid;
  resolved["threads"] = threads;
  return spec;
}

}  // namespace

CommandOutput cmd_chi(const Json& config, const RunOptions&) {
  const std::string ctx = "chi";
  check_keys(config, {"r_s", "r_A", "r_B", "g", "h", "c"}, ctx);
  Json resolved = config;
  const bool schwarzschild = config.contains("r_s") || config.contains("r_A") || config.contains("r_B");
  const bool weak = config.contains("g") || config.contains("h") || config.contains("c");
  if (schwarzschild == weak)
    throw SchemaError("chi: give either {r_s, r_A, r_B} or {g, h[, c]}");

  RedshiftFactor factor{};
  std::string model;
  if (schwarzschild) {
    factor = schwarzschild_redshift({require_number(config, "r_s", ctx), require_number(config, "r_A", ctx),
                                     require_number(config, "r_B", ctx)});
    model = "schwarzschild";
  } else {
    const double c = config.contains("c") ? require_number(config, "c", ctx) : kSpeedOfLight;
    factor = weak_field_redshift(require_number(config, "g", ctx), require_number(config, "h", ctx), c);
    resolved["c"] = c;
    model = "weak_field";
  }
  Json report = header("chi", resolved);
  report["model"] = model;
  report["chi"] = factor.chi;
  report["chi_squared"] = factor.chi_squared();
  report["chi_minus_one"] = factor.chi_minus_one;
  report["frequency_ratio"] = 1.0 / factor.chi_squared();
  return scalar_output(std::move(report));
}

CommandOutput cmd_nogo(const Json& config, const RunOptions&) {
  const std::string ctx = "nogo";
  check_keys(config, {"chi", "geometry"}, ctx);
  const double chi = resolve_chi(config, ctx);
  const double value = nogo_normalization(chi);
  const bool impossible = sharp_shift_is_nonunitary(chi);
  Json report = header("nogo", config);
  report["chi"] = chi;
  report["normalization"] = value;
  report["unitary_shift_possible"] = !impossible;
  report["message"] = impossible ? "unitary shift impossible" : "no shift: identity";
  return scalar_output(std::move(report));
}

CommandOutput cmd_tritter(const Json& config, const RunOptions&) {
  const std::string ctx = "tritter";
  check_keys(config, {"modes", "chi", "geometry", "orthonormalize"}, ctx);
  Json resolved = config;
  const Tolerances tol = read_tolerances(config, resolved, false);
  const bool ortho = optional_bool(config, "orthonormalize", false, ctx);
  resolved["orthonormalize"] = ortho;
  if (!config.contains("modes")) throw SchemaError("tritter: missing key \"modes\"");
  const double chi = resolve_chi(config, ctx);

  const auto [f1, f2] = modes_from_config(config, ortho, tol.quadrature, ctx);
  const TritterResult t = tritter_from_modes(f1, f2, chi, tol.quadrature);

  Json report = header("tritter", resolved);
  report["chi"] = chi;
  report["angles"] = angles_to_json(t.angles);
  report["overlaps"] = {{"o11", overlap_json(t.overlaps.o11)},
                        {"o22", overlap_json(t.overlaps.o22)},
                        {"o21", overlap_json(t.overlaps.o21)},
                        {"o12", overlap_json(t.overlaps.o12)},
                        {"input_overlap", t.overlaps.input_overlap},
                        {"fourth_overlap_residual", t.overlaps.fourth_overlap_residual}};
  report["matrix"] = matrix_to_json(t.matrix);
  report["unitarity_residual"] = unitarity_residual(t.matrix);
  report["determinant"] = complex_to_json(t.matrix.determinant());
  if (ortho) report["modes"] = Json::array({profile_to_json(f1), profile_to_json(f2)});
  return scalar_output(std::move(report));
}

CommandOutput cmd_evolve(const Json& config, const RunOptions& options) {
  const std::string ctx = "evolve";
  check_keys(config, {"modes", "family", "angles", "chi", "geometry", "orthonormalize", "n_max", "pure_check", "seed"},
             ctx);
  Json resolved = config;
  const Tolerances tol = read_tolerances(config, resolved, false);
  const int n_max = optional_int(config, "n_max", 2, ctx);
  if (n_max < 2) throw SchemaError("evolve: \"n_max\" must be >= 2");
  const bool pure_check = optional_bool(config, "pure_check", false, ctx);
  resolved["n_max"] = n_max;
  resolved["pure_check"] = pure_check;

  const int sources = int(config.contains("modes")) + int(config.contains("family")) + int(config.contains("angles"));
  if (sources != 1) throw SchemaError("evolve: give exactly one of \"modes\", \"family\" or \"angles\"");

  TritterAngles angles;
  MixerMatrix u;
  double chi = std::numeric_limits<double>::quiet_NaN();
  if (config.contains("angles")) {
    if (config.contains("chi") || config.contains("geometry") || config.contains("orthonormalize"))
      throw SchemaError("evolve: \"angles\" cannot be combined with chi, geometry or orthonormalize");
    const Json& a = config["angles"];
    if (a.is_string() && a == "random") {
      unsigned long long seed = 0;
      if (options.seed) seed = *options.seed;
      else if (config.contains("seed")) {
        if (!config["seed"].is_number_unsigned()) throw SchemaError("evolve: \"seed\" must be a non-negative integer");
        seed = config["seed"].get<unsigned long long>();
      }
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dist(0.0, std::numbers::pi / 2.0);
      angles.theta = dist(rng);
      angles.phi = dist(rng);
      angles.psi = dist(rng);
      resolved["seed"] = seed;
    } else {
      if (config.contains("seed")) throw SchemaError("evolve: \"seed\" only applies to random angles");
      angles = angles_from_json(a);
    }
    u = build_tritter(angles);
  } else {
    if (config.contains("seed")) throw SchemaError("evolve: \"seed\" only applies to random angles");
    chi = resolve_chi(config, ctx);
    std::pair<ModeProfile, ModeProfile> modes = [&] {
      if (config.contains("family")) {
        if (config.contains("orthonormalize")) throw SchemaError("evolve: family modes are always orthonormalized");
        const ModeFamily family = family_from_json(config["family"], tol.quadrature);
        if (family.kind == FamilyKind::angles) throw SchemaError("evolve: use \"angles\" for an angle family");
        return family_modes(family, tol.quadrature);
      }
      const bool ortho = optional_bool(config, "orthonormalize", false, ctx);
      resolved["orthonormalize"] = ortho;
      return modes_from_config(config, ortho, tol.quadrature, ctx);
    }();
    const TritterResult t = tritter_from_modes(modes.first, modes.second, chi, tol.quadrature);
    angles = t.angles;
    u = t.matrix;
  }

  const FockState state = evolve_two_photon(u);
  const TwoModeDensityMatrix rho = trace_out_third(state, n_max);
  const HomRecord hom = hom_record(u, tol.hom_flag);

  Json report = header("evolve", resolved);
  if (!std::isnan(chi)) report["chi"] = chi;
  report["angles"] = angles_to_json(angles);
  report["matrix"] = matrix_to_json(u);
  report["state"] = state_to_json(state);
  report["reduced_density_matrix"] = density_to_json(rho);
  report["negativity"] = negativity(rho);
  report["negativity_lower_bound"] = negativity_lower_bound(rho);
  report["hom"] = {{"coefficient", hom.coefficient},
                   {"signed_value", hom.signed_value},
                   {"rho2020", hom.rho2020},
                   {"rho0202", hom.rho0202},
                   {"hom", hom.hom}};
  if (pure_check) {
    try {
      report["pure_check"] = {{"applicable", true}, {"negativity", pure_state_negativity(state)}};
    } catch (const DomainError& e) {
      report["pure_check"] = {{"applicable", false}, {"negativity", nullptr}, {"reason", e.what()}};
    }
  }
  SweepThresholds th = tol.thresholds;
  th.hom_tolerance = tol.hom_flag;
  report["sweep_row"] = format_sweep_row(pipeline_row(std::isnan(chi) ? 0.0 : chi, chi, angles, u, th));
  return scalar_output(std::move(report));
}

CommandOutput cmd_sweep(const Json& config, const RunOptions&) {
  const std::string ctx = "sweep";
  check_keys(config, {"family", "chi_range", "grid", "threads"}, ctx);
  Json resolved = config;
  SweepSpec spec = read_sweep_spec(config, resolved, ctx);
  spec.axis = SweepAxis::chi;
  std::tie(spec.lo, spec.hi) = read_range(config, "chi_range", ctx);
  const std::vector<SweepRow> rows = sweep_chi(spec);

  Json report = header("sweep", resolved);
  Json table = Json::array();
  for (const SweepRow& r : rows) table.push_back(sweep_row_to_json(r));
  report["rows"] = table;

  std::ostringstream csv;
  csv << "# " << header("sweep", resolved).dump() << '\n' << kSweepCsvHeader << '\n';
  write_sweep_rows(csv, rows);
  return {std::move(report), csv.str()};
}

CommandOutput cmd_find_hom(const Json& config, const RunOptions&) {
  const std::string ctx = "find-hom";
  check_keys(config, {"family", "axis", "range", "grid", "threads", "chi", "geometry"}, ctx);
  Json resolved = config;
  SweepSpec spec = read_sweep_spec(config, resolved, ctx);
  std::string axis_name = "chi";
  if (config.contains("axis")) {
    if (!config["axis"].is_string()) throw SchemaError("find-hom: \"axis\" must be a string");
    axis_name = config["axis"].get<std::string>();
  }
  const auto axis = parse_axis(axis_name);
  if (!axis) throw SchemaError(fmt::format("find-hom: unknown axis \"{}\"", axis_name));
  spec.axis = *axis;
  resolved["axis"] = axis_name;
  std::tie(spec.lo, spec.hi) = read_range(config, "range", ctx);
  const bool needs_chi = spec.axis != SweepAxis::chi && spec.family.kind != FamilyKind::angles;
  if (needs_chi) {
    spec.chi = resolve_chi(config, ctx);
  } else if (config.contains("chi") || config.contains("geometry")) {
    throw SchemaError("find-hom: a fixed chi only applies to mode families swept along a non-chi axis");
  }
  const std::vector<HomRoot> roots = find_hom(spec);

  Json report = header("find-hom", resolved);
  Json list = Json::array();
  for (const HomRoot& root : roots) {
    Json entry = sweep_row_to_json(root.row);
    entry["axis"] = axis_name;
    entry["iterations"] = root.iterations;
    entry["converged"] = root.converged;
    list.push_back(entry);
  }
  report["roots"] = list;

  std::ostringstream csv;
  csv << "# " << header("find-hom", resolved).dump() << '\n' << kRootCsvHeader << '\n';
  write_root_rows(csv, spec.axis, roots);
  return {std::move(report), csv.str()};
}

CommandOutput run_command(const std::string& name, const Json& config, const RunOptions& options) {
  if (name == "chi") return cmd_chi(config, options);
  if (name == "nogo") return cmd_nogo(config, options);
  if (name == "tritter") return cmd_tritter(config, options);
  if (name == "evolve") return cmd_evolve(config, options);
  if (name == "sweep") return cmd_sweep(config, options);
  if (name == "find-hom") return cmd_find_hom(config, options);
  throw SchemaError(fmt::format("unknown command \"{}\"", name));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gravitational redshift as a three-mode mixer on photon wavepackets", "gravtritter"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format_name;
  unsigned long long seed = 0;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"chi", "redshift parameter for static observers"},
      {"nogo", "normalization defect of a sharp-frequency shift"},
      {"tritter", "mixer angles and matrix for a mode pair"},
      {"evolve", "two-photon state, reduced state, negativity, HOM record"},
      {"sweep", "pipeline table over a chi grid"},
      {"find-hom", "locate HOM configurations along one axis"},
  };
  std::vector<CLI::Option*> seed_options;
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    seed_options.push_back(sub->add_option("--seed", seed, "seed for randomized angles"));
  }

  std::vector<const char*> argv{"gravtritter"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitSchema;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();

  Json config;
  {
    std::ifstream in(config_path);
    if (!in) {
      err << "error: cannot read config " << config_path << '\n';
      return kExitSchema;
    }
    try {
      in >> config;
    } catch (const Json::exception& e) {
      err << "error: config is not valid JSON: " << e.what() << '\n';
      return kExitSchema;
    }
  }

  RunOptions options;
  for (const CLI::Option* opt : seed_options)
    if (opt->count() > 0) options.seed = seed;

  CommandOutput result;
  try {
    result = run_command(command, config, options);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  const bool table = command == "sweep" || command == "find-hom";
  Format format = table ? Format::csv : Format::json;
  if (config.contains("format")) format = config["format"] == "csv" ? Format::csv : Format::json;
  if (!format_name.empty()) format = format_name == "csv" ? Format::csv : Format::json;
  if (out_path.empty() && config.contains("out")) out_path = config["out"].get<std::string>();

  const std::string text = format == Format::csv ? result.csv : result.report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot write " << out_path << '\n';
    return kExitOutput;
  }
  file << text;
  file.flush();
  if (!file) {
    err << "error: write to " << out_path << " failed\n";
    return kExitOutput;
  }
  logger()->info("wrote {}", out_path);
  return kExitOk;
}

}  // namespace gravtritter::cli
