#include "levitsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <regex>
#include <string_view>

#include "levitsim/errors.hpp"
#include "scenario_internal.hpp"

namespace levitsim {

using io::json;

namespace {

struct UnitEntry {
  Dimension dim;
  std::string_view unit;
  double factor;
};

constexpr double kTwoPi = 2.0 * constants::kPi;

// Frequency precedes Rate and Bandwidth so that unit_dimension("Hz") reports Frequency.
const UnitEntry kUnits[] = {
    {Dimension::Length, "m", 1.0},
    {Dimension::Length, "cm", 1e-2},
    {Dimension::Length, "mm", 1e-3},
    {Dimension::Length, "um", 1e-6},
    {Dimension::Length, "nm", 1e-9},
    {Dimension::Length, "pm", 1e-12},
    {Dimension::Pressure, "Pa", 1.0},
    {Dimension::Pressure, "hPa", 1e2},
    {Dimension::Pressure, "kPa", 1e3},
    {Dimension::Pressure, "mbar", constants::kPascalPerMbar},
    {Dimension::Pressure, "torr", constants::kPascalPerTorr},
    {Dimension::Pressure, "Torr", constants::kPascalPerTorr},
    {Dimension::Temperature, "K", 1.0},
    {Dimension::Temperature, "mK", 1e-3},
    {Dimension::Temperature, "uK", 1e-6},
    {Dimension::Frequency, "rad/s", 1.0},
    {Dimension::Frequency, "1/s", 1.0},
    {Dimension::Frequency, "Hz", kTwoPi},
    {Dimension::Frequency, "kHz", kTwoPi * 1e3},
    {Dimension::Frequency, "MHz", kTwoPi * 1e6},
    {Dimension::Frequency, "GHz", kTwoPi * 1e9},
    {Dimension::Rate, "1/s", 1.0},
    {Dimension::Bandwidth, "Hz", 1.0},
    {Dimension::Bandwidth, "kHz", 1e3},
    {Dimension::Time, "s", 1.0},
    {Dimension::Time, "ms", 1e-3},
    {Dimension::Time, "us", 1e-6},
    {Dimension::Time, "ns", 1e-9},
    {Dimension::Density, "kg/m^3", 1.0},
    {Dimension::Density, "g/cm^3", 1e3},
    {Dimension::Mass, "kg", 1.0},
    {Dimension::Mass, "g", 1e-3},
    {Dimension::Mass, "amu", 1.66053906660e-27},
    {Dimension::Intensity, "W/m^2", 1.0},
    {Dimension::Intensity, "W/cm^2", 1e4},
    {Dimension::Intensity, "W/um^2", 1e12},
    {Dimension::Power, "W", 1.0},
    {Dimension::Power, "mW", 1e-3},
    {Dimension::Power, "uW", 1e-6},
    {Dimension::Gradient, "T/m", 1.0},
    {Dimension::Gradient, "G/cm", 1e-2},
    {Dimension::PerHz, "1/Hz", 1.0},
    {Dimension::LengthSqPerHz, "m^2/Hz", 1.0},
};

std::string units_of(Dimension d) {
  std::string out;
  for (const auto& e : kUnits) {
    if (e.dim != d) continue;
    if (!out.empty()) out += ", ";
    out += e.unit;
  }
  return out;
}

}  // namespace

std::string to_string(Dimension d) {
  switch (d) {
    case Dimension::None: return "dimensionless";
    case Dimension::Length: return "length";
    case Dimension::Pressure: return "pressure";
    case Dimension::Temperature: return "temperature";
    case Dimension::Frequency: return "angular frequency";
    case Dimension::Rate: return "rate";
    case Dimension::Bandwidth: return "bandwidth";
    case Dimension::Time: return "time";
    case Dimension::Density: return "density";
    case Dimension::Mass: return "mass";
    case Dimension::Intensity: return "intensity";
    case Dimension::Power: return "power";
    case Dimension::Gradient: return "field gradient";
    case Dimension::PerHz: return "relative spectral density";
    case Dimension::LengthSqPerHz: return "displacement spectral density";
  }
  return "?";
}

std::string si_unit(Dimension d) {
  switch (d) {
    case Dimension::None: return "1";
    case Dimension::Length: return "m";
    case Dimension::Pressure: return "Pa";
    case Dimension::Temperature: return "K";
    case Dimension::Frequency: return "rad/s";
    case Dimension::Rate: return "1/s";
    case Dimension::Bandwidth: return "Hz";
    case Dimension::Time: return "s";
    case Dimension::Density: return "kg/m^3";
    case Dimension::Mass: return "kg";
    case Dimension::Intensity: return "W/m^2";
    case Dimension::Power: return "W";
    case Dimension::Gradient: return "T/m";
    case Dimension::PerHz: return "1/Hz";
    case Dimension::LengthSqPerHz: return "m^2/Hz";
  }
  return "?";
}

double to_si(double value, const std::string& unit, Dimension dim, const std::string& field) {
  for (const auto& e : kUnits) {
    if (e.dim == dim && e.unit == unit) return value * e.factor;
  }
  if (auto other = unit_dimension(unit)) {
    throw ConfigError("unit mismatch for '" + field + "': '" + unit + "' is a " +
                      to_string(*other) + " unit, expected " + to_string(dim) + " (" +
                      units_of(dim) + ")");
  }
  throw ConfigError("unknown unit '" + unit + "' for '" + field + "' (expected one of " +
                    units_of(dim) + ")");
}

std::optional<Dimension> unit_dimension(const std::string& unit) {
  for (const auto& e : kUnits) {
    if (e.unit == unit) return e.dim;
  }
  return std::nullopt;
}

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Brownian: return "brownian";
    case ScenarioKind::Feedback: return "feedback";
    case ScenarioKind::CavityCool: return "cavity-cool";
    case ScenarioKind::Budget: return "budget";
    case ScenarioKind::Fock: return "fock";
    case ScenarioKind::Cat: return "cat";
    case ScenarioKind::SenseSweep: return "sense-sweep";
    case ScenarioKind::Collide: return "collide";
  }
  return "?";
}

const std::vector<ScenarioKind>& all_scenario_kinds() {
  static const std::vector<ScenarioKind> kinds = {
      ScenarioKind::Brownian, ScenarioKind::Feedback, ScenarioKind::CavityCool,
      ScenarioKind::Budget,   ScenarioKind::Fock,     ScenarioKind::Cat,
      ScenarioKind::SenseSweep, ScenarioKind::Collide};
  return kinds;
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  std::string names;
  for (auto k : all_scenario_kinds()) {
    if (to_string(k) == s) return k;
    names += (names.empty() ? "" : ", ") + to_string(k);
  }
  throw ConfigError("unknown scenario kind '" + s + "' (expected one of " + names + ")");
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

bool Scenario::operator==(const Scenario& o) const {
  return name == o.name && kind == o.kind && seed == o.seed && description == o.description &&
         output == o.output && parameters == o.parameters && resolved == o.resolved;
}

// ---------------------------------------------------------------------------------------
// Schema

namespace detail {

namespace {

Field quantity(std::string name, Dimension d, Requirement req, json fallback = nullptr,
               Bound bound = Bound::Positive) {
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::Quantity;
  f.dim = d;
  f.required = req == Requirement::Required;
  f.fallback = std::move(fallback);
  f.bound = bound;
  return f;
}

Field number(std::string name, Requirement req, json fallback = nullptr, Bound bound = Bound::Any) {
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::Number;
  f.required = req == Requirement::Required;
  f.fallback = std::move(fallback);
  f.bound = bound;
  return f;
}

Field integer(std::string name, Requirement req, json fallback = nullptr,
              Bound bound = Bound::NonNegative) {
  Field f = number(std::move(name), req, std::move(fallback), bound);
  f.kind = FieldKind::Integer;
  return f;
}

Field string(std::string name, Requirement req, std::vector<std::string> choices,
             json fallback = nullptr) {
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::String;
  f.required = req == Requirement::Required;
  f.choices = std::move(choices);
  f.fallback = std::move(fallback);
  return f;
}

Field boolean(std::string name, bool fallback) {
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::Bool;
  f.fallback = fallback;
  return f;
}

Field object(std::string name, Requirement req, std::vector<Field> children,
             bool default_when_absent = false) {
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::Object;
  f.required = req == Requirement::Required;
  f.children = std::move(children);
  if (default_when_absent) f.fallback = json::object();
  return f;
}

Field any_quantity(std::string name) {
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::AnyQuantity;
  f.required = true;
  f.bound = Bound::Positive;
  return f;
}

Field particle() {
  return object("particle", Requirement::Required,
                {quantity("radius", Dimension::Length, Requirement::Required),
                 quantity("density", Dimension::Density, Requirement::Optional),
                 quantity("mass", Dimension::Mass, Requirement::Optional),
                 number("permittivity", Requirement::Optional, 2.1)});
}

Field gas() {
  return object("gas", Requirement::Required,
                {quantity("pressure", Dimension::Pressure, Requirement::Required, nullptr,
                          Bound::NonNegative),
                 quantity("temperature", Dimension::Temperature, Requirement::Optional, 300.0),
                 quantity("molecule_mass", Dimension::Mass, Requirement::Optional,
                          constants::kAirMoleculeMass)});
}

Field trap() {
  Field freqs;
  freqs.name = "frequencies";
  freqs.kind = FieldKind::QuantityList;
  freqs.dim = Dimension::Frequency;
  freqs.required = true;
  freqs.list_size = 3;
  freqs.bound = Bound::Positive;
  return object("trap", Requirement::Required,
                {freqs, quantity("wavelength", Dimension::Length, Requirement::Optional, 1064e-9),
                 quantity("intensity", Dimension::Intensity, Requirement::Optional, 0.0,
                          Bound::NonNegative)});
}

Field cavity() {
  return object("cavity", Requirement::Required,
                {quantity("length", Dimension::Length, Requirement::Required),
                 quantity("waist", Dimension::Length, Requirement::Required),
                 quantity("kappa", Dimension::Frequency, Requirement::Required),
                 quantity("wavelength", Dimension::Length, Requirement::Optional, 1064e-9)});
}

const std::vector<std::string> kAxes = {"x", "y", "z"};

}  // namespace

const std::vector<Field>& schema(ScenarioKind k) {
  using R = Requirement;
  using D = Dimension;
  static const std::vector<Field> brownian = {
      particle(), gas(), trap(),
      quantity("duration", D::Time, R::Required),
      quantity("dt", D::Time, R::Optional),
      integer("record_stride", R::Optional, 1, Bound::Positive),
      integer("histogram_bins", R::Optional, 61, Bound::Positive),
      integer("welch_segment", R::Optional, 0),
      quantity("velocity_window", D::Time, R::Optional),
      boolean("write_trajectory", false)};
  static const std::vector<Field> feedback = {
      particle(), gas(), trap(),
      string("axis", R::Optional, kAxes, "y"),
      [] {
        Field f = number("ratios", R::Required, nullptr, Bound::NonNegative);
        f.kind = FieldKind::NumberList;
        return f;
      }(),
      integer("segment_length", R::Optional, 1024, Bound::Positive),
      integer("segments", R::Optional, 128, Bound::Positive),
      integer("record_stride", R::Optional, 4, Bound::Positive)};
  static const std::vector<Field> cavity_cool = {
      quantity("omega_m", D::Frequency, R::Required),
      quantity("kappa", D::Frequency, R::Required),
      quantity("g", D::Frequency, R::Optional),
      object("drive", R::Optional,
             {quantity("detuning", D::Frequency, R::Required, nullptr, Bound::Any),
              quantity("rabi", D::Frequency, R::Required, nullptr, Bound::NonNegative),
              quantity("power", D::Power, R::Optional, 0.0, Bound::NonNegative)}),
      quantity("enhanced_coupling", D::Frequency, R::Optional),
      quantity("delta_eff", D::Frequency, R::Optional, nullptr, Bound::Any),
      object("scan", R::Optional,
             {integer("points", R::Optional, 201, Bound::Positive),
              number("min_ratio", R::Optional, -3.0),
              number("max_ratio", R::Optional, -0.05)},
             true),
      object("dynamics", R::Optional,
             {number("n_init", R::Required, nullptr, Bound::NonNegative),
              quantity("t_end", D::Time, R::Optional),
              integer("points", R::Optional, 200, Bound::Positive)})};
  static const std::vector<Field> budget = {
      particle(), gas(), trap(), cavity(),
      object("noise", R::Optional,
             {quantity("s_eps", D::PerHz, R::Optional, 0.0, Bound::NonNegative),
              quantity("s_x", D::LengthSqPerHz, R::Optional, 0.0, Bound::NonNegative),
              quantity("linewidth", D::Frequency, R::Optional, 0.0, Bound::NonNegative),
              quantity("gamma_c", D::Frequency, R::Optional, 0.0, Bound::NonNegative),
              number("n_c", R::Optional, 0.0, Bound::NonNegative)},
             true),
      string("axis", R::Optional, kAxes, "z")};
  static const std::vector<Field> fock = {
      quantity("lambda", D::Frequency, R::Required),
      integer("n", R::Required),
      integer("dim", R::Optional, 64, Bound::Positive),
      object("qnd", R::Optional,
             {quantity("rabi", D::Frequency, R::Required, nullptr, Bound::Any),
              quantity("omega_m", D::Frequency, R::Required),
              quantity("time", D::Time, R::Required, nullptr, Bound::NonNegative)})};
  static const std::vector<Field> cat = {
      particle(),
      quantity("omega_m", D::Frequency, R::Required),
      quantity("gradient", D::Gradient, R::Required, nullptr, Bound::NonNegative),
      integer("n_m", R::Optional, 0),
      integer("dim", R::Optional, 0),
      integer("sign", R::Optional, 1, Bound::Any),
      quantity("flight_time", D::Time, R::Optional, 10e-3),
      object("fringe", R::Optional,
             {integer("points", R::Optional, 2001, Bound::Positive),
              quantity("half_width", D::Length, R::Optional)},
             true)};
  static const std::vector<Field> sense_sweep = {
      particle(), gas(),
      quantity("frequency", D::Frequency, R::Required),
      quantity("bandwidth", D::Bandwidth, R::Optional, 1.0),
      quantity("wavelength", D::Length, R::Optional, 1064e-9),
      quantity("r_plus", D::Rate, R::Optional, 0.0, Bound::NonNegative),
      object("sweep", R::Required,
             {string("axis", R::Required, {"radius", "frequency", "pressure", "temperature"}),
              any_quantity("start"), any_quantity("stop"),
              integer("points", R::Optional, 200, Bound::Positive),
              string("spacing", R::Optional, {"log", "linear"}, "log")})};
  static const std::vector<Field> collide = {
      particle(), gas(),
      quantity("omega_j", D::Frequency, R::Required),
      object("coupling", R::Required,
             {quantity("g", D::Frequency, R::Required, nullptr, Bound::NonNegative),
              number("alpha", R::Required, nullptr, Bound::NonNegative),
              quantity("kappa", D::Frequency, R::Required)}),
      quantity("t_sur", D::Temperature, R::Required),
      string("elasticity", R::Optional, {"elastic", "inelastic"}, "elastic"),
      quantity("duration", D::Time, R::Optional),
      integer("events", R::Optional, nullptr, Bound::Positive)};

  switch (k) {
    case ScenarioKind::Brownian: return brownian;
    case ScenarioKind::Feedback: return feedback;
    case ScenarioKind::CavityCool: return cavity_cool;
    case ScenarioKind::Budget: return budget;
    case ScenarioKind::Fock: return fock;
    case ScenarioKind::Cat: return cat;
    case ScenarioKind::SenseSweep: return sense_sweep;
    case ScenarioKind::Collide: return collide;
  }
  throw std::logic_error("schema: unhandled kind");
}

namespace {

std::string join(const std::string& path, const std::string& name) {
  return path.empty() ? name : path + "." + name;
}

void check_bound(double v, Bound b, const std::string& where) {
  if (!std::isfinite(v)) throw ConfigError("'" + where + "' must be finite");
  if (b == Bound::Positive && !(v > 0.0)) throw ConfigError("'" + where + "' must be > 0");
  if (b == Bound::NonNegative && !(v >= 0.0)) throw ConfigError("'" + where + "' must be >= 0");
}

double tagged(const json& raw, Dimension dim, const std::string& where, Dimension* found) {
  if (!raw.is_object()) {
    throw ConfigError("'" + where + "' needs a unit-tagged value {\"value\": ..., \"unit\": \"" +
                      si_unit(dim) + "\"}");
  }
  for (const auto& [k, v] : raw.items()) {
    if (k != "value" && k != "unit") throw ConfigError("unknown key '" + join(where, k) + "'");
  }
  if (!raw.contains("value") || !raw["value"].is_number()) {
    throw ConfigError("'" + where + ".value' must be a number");
  }
  if (!raw.contains("unit") || !raw["unit"].is_string()) {
    throw ConfigError("'" + where + ".unit' must be a string");
  }
  const double v = raw["value"].get<double>();
  const auto unit = raw["unit"].get<std::string>();
  if (found) {
    const auto d = unit_dimension(unit);
    if (!d) throw ConfigError("unknown unit '" + unit + "' for '" + where + "'");
    *found = *d;
    return to_si(v, unit, *d, where);
  }
  return to_si(v, unit, dim, where);
}

json resolve_field(const Field& f, const json& raw, const std::string& where) {
  switch (f.kind) {
    case FieldKind::Quantity: {
      const double v = tagged(raw, f.dim, where, nullptr);
      check_bound(v, f.bound, where);
      return v;
    }
    case FieldKind::AnyQuantity: {
      Dimension d = Dimension::None;
      const double v = tagged(raw, f.dim, where, &d);
      check_bound(v, f.bound, where);
      return json{{"value", v}, {"dimension", to_string(d)}};
    }
    case FieldKind::QuantityList: {
      if (!raw.is_array()) throw ConfigError("'" + where + "' must be an array");
      if (f.list_size && raw.size() != f.list_size) {
        throw ConfigError("'" + where + "' must have " + std::to_string(f.list_size) + " entries");
      }
      json out = json::array();
      for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        const double v = tagged(raw[i], f.dim, w, nullptr);
        check_bound(v, f.bound, w);
        out.push_back(v);
      }
      return out;
    }
    case FieldKind::Number: {
      if (!raw.is_number()) throw ConfigError("'" + where + "' must be a number");
      const double v = raw.get<double>();
      check_bound(v, f.bound, where);
      return v;
    }
    case FieldKind::NumberList: {
      if (!raw.is_array() || raw.empty()) {
        throw ConfigError("'" + where + "' must be a non-empty array of numbers");
      }
      json out = json::array();
      for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        if (!raw[i].is_number()) throw ConfigError("'" + w + "' must be a number");
        check_bound(raw[i].get<double>(), f.bound, w);
        out.push_back(raw[i].get<double>());
      }
      return out;
    }
    case FieldKind::Integer: {
      if (!raw.is_number_integer()) throw ConfigError("'" + where + "' must be an integer");
      const auto v = raw.get<std::int64_t>();
      check_bound(static_cast<double>(v), f.bound, where);
      return v;
    }
    case FieldKind::Bool:
      if (!raw.is_boolean()) throw ConfigError("'" + where + "' must be true or false");
      return raw;
    case FieldKind::String: {
      if (!raw.is_string()) throw ConfigError("'" + where + "' must be a string");
      const auto s = raw.get<std::string>();
      if (!f.choices.empty() &&
          std::find(f.choices.begin(), f.choices.end(), s) == f.choices.end()) {
        std::string opts;
        for (const auto& c : f.choices) opts += (opts.empty() ? "" : ", ") + c;
        throw ConfigError("'" + where + "' is '" + s + "', expected one of " + opts);
      }
      return s;
    }
    case FieldKind::Object:
      return resolve_object(f.children, raw, where);
  }
  throw std::logic_error("resolve_field: unhandled kind");
}

}  // namespace

json resolve_object(const std::vector<Field>& fields, const json& raw, const std::string& path) {
  if (!raw.is_object()) {
    throw ConfigError("'" + (path.empty() ? std::string("parameters") : path) +
                      "' must be an object");
  }
  for (const auto& [key, value] : raw.items()) {
    const bool known = std::any_of(fields.begin(), fields.end(),
                                   [&](const Field& f) { return f.name == key; });
    if (!known) throw ConfigError("unknown key '" + join(path, key) + "'");
  }
  json out = json::object();
  for (const auto& f : fields) {
    const std::string where = join(path, f.name);
    if (raw.contains(f.name)) {
      out[f.name] = resolve_field(f, raw[f.name], where);
    } else if (f.required) {
      throw ConfigError("missing required field '" + where + "'");
    } else if (f.kind == FieldKind::Object && f.fallback.is_object()) {
      out[f.name] = resolve_object(f.children, json::object(), where);
    } else if (!f.fallback.is_null()) {
      out[f.name] = f.fallback;
    }
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------
// Parsing

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  static const std::vector<std::string> top = {"name", "kind", "seed", "description", "output",
                                               "parameters"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(top.begin(), top.end(), k) == top.end()) {
      throw ConfigError("unknown key '" + k + "'");
    }
  }
  for (const char* req : {"name", "kind", "parameters"}) {
    if (!j.contains(req)) throw ConfigError(std::string("missing required field '") + req + "'");
  }
  Scenario s;
  if (!j["name"].is_string()) throw ConfigError("'name' must be a string");
  s.name = j["name"].get<std::string>();
  static const std::regex name_re("^[A-Za-z0-9._-]+$");
  if (!std::regex_match(s.name, name_re) || s.name == "." || s.name == "..") {
    throw ConfigError("'name' may contain only letters, digits, '.', '_' and '-'");
  }
  if (!j["kind"].is_string()) throw ConfigError("'kind' must be a string");
  s.kind = scenario_kind_from_string(j["kind"].get<std::string>());
  if (j.contains("seed")) {
    const auto& sd = j["seed"];
    if (!sd.is_number_integer() || (!sd.is_number_unsigned() && sd.get<std::int64_t>() < 0))
      throw ConfigError("'seed' must be a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("description")) {
    if (!j["description"].is_string()) throw ConfigError("'description' must be a string");
    s.description = j["description"].get<std::string>();
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ConfigError("'output' must be a string");
    s.output = j["output"].get<std::string>();
  }
  s.parameters = j["parameters"];
  s.resolved = detail::resolve_object(detail::schema(s.kind), s.parameters, "");
  detail::check_kind(s.kind, s.resolved);
  return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(j);
}

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["kind"] = to_string(s.kind);
  j["seed"] = s.seed;
  if (!s.description.empty()) j["description"] = s.description;
  if (!s.output.empty()) j["output"] = s.output;
  j["parameters"] = s.parameters;
  return j;
}

std::string scenario_hash(const Scenario& s) { return io::sha256_hex(to_json(s).dump()); }

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv("LEVITSIM_OUT"); env && *env) return env;
  return "levitsim-out";
}

std::string toolkit_version() { return LEVITSIM_VERSION; }

json to_json(const RunManifest& m) {
  json j;
  j["scenario"] = m.scenario;
  j["kind"] = m.kind;
  j["scenario_hash"] = m.scenario_hash;
  j["toolkit_version"] = m.version;
  j["timestamp"] = m.timestamp;
  j["seed"] = m.seed;
  j["parameters"] = m.parameters;
  j["resolved_parameters"] = m.resolved;
  j["warnings"] = m.warnings;
  json files = json::array();
  for (const auto& f : m.files) {
    files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  j["files"] = std::move(files);
  return j;
}

}  // namespace levitsim
