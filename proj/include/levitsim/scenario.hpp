#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levitsim/io.hpp"

namespace levitsim {

enum class Dimension {
  None,
  Length,
  Pressure,
  Temperature,
  Frequency,  // angular; "Hz" values are read as omega / 2 pi
  Rate,       // 1/s
  Bandwidth,  // ordinary Hz
  Time,
  Density,
  Mass,
  Intensity,
  Power,
  Gradient,
  PerHz,
  LengthSqPerHz
};

std::string to_string(Dimension d);
std::string si_unit(Dimension d);

/// Converts a tagged value to SI. Throws ConfigError naming the field when the unit is
/// unknown or belongs to another dimension.
double to_si(double value, const std::string& unit, Dimension dim, const std::string& field);

/// First dimension that accepts this unit, if any.
std::optional<Dimension> unit_dimension(const std::string& unit);

enum class ScenarioKind { Brownian, Feedback, CavityCool, Budget, Fock, Cat, SenseSweep, Collide };

std::string to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);
const std::vector<ScenarioKind>& all_scenario_kinds();

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::Brownian;
  std::uint64_t seed = 1;
  std::string description;
  std::string output;       // subdirectory override, empty uses name
  io::json parameters;      // as written
  io::json resolved;        // SI values with defaults applied

  bool operator==(const Scenario& o) const;
};

/// Strict parse: unknown keys, missing required fields and unit mismatches throw ConfigError.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const io::json& j);

io::json to_json(const Scenario& s);

/// SHA-256 of the compact serialized scenario.
std::string scenario_hash(const Scenario& s);

enum class OutputFormat { Csv, Json };
OutputFormat output_format_from_string(const std::string& s);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_root;  // empty uses default_output_root()
  OutputFormat format = OutputFormat::Csv;
};

/// $LEVITSIM_OUT if set, else ./levitsim-out.
std::filesystem::path default_output_root();

struct EmittedFile {
  std::string path;  // relative to the run directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string scenario;
  std::string kind;
  std::string scenario_hash;
  std::string version;
  std::string timestamp;
  std::uint64_t seed = 0;
  io::json parameters;
  io::json resolved;
  io::json summary;
  std::vector<std::string> warnings;
  std::vector<EmittedFile> files;
  std::filesystem::path directory;
};

io::json to_json(const RunManifest& m);

/// Dispatches to the owning module, writes data files, summary.json and manifest.json.
RunManifest run_scenario(const Scenario& s, const RunOptions& options);

std::string toolkit_version();

}  // namespace levitsim
