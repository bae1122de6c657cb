#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "levitsim/model.hpp"
#include "levitsim/scenario.hpp"

namespace levitsim::detail {

using io::json;

enum class FieldKind {
  Quantity,
  AnyQuantity,  // any known unit; resolved to {value, dimension}
  QuantityList,
  Number,
  NumberList,
  Integer,
  Bool,
  String,
  Object
};

enum class Bound { Any, NonNegative, Positive };
enum class Requirement { Required, Optional };

struct Field {
  std::string name;
  FieldKind kind = FieldKind::Number;
  Dimension dim = Dimension::None;
  bool required = false;
  json fallback;  // SI default; an empty object on an Object field resolves its defaults
  Bound bound = Bound::Any;
  std::vector<Field> children;
  std::vector<std::string> choices;
  std::size_t list_size = 0;
};

const std::vector<Field>& schema(ScenarioKind k);
json resolve_object(const std::vector<Field>& fields, const json& raw, const std::string& path);

/// Cross-field checks; builds the module objects so that domain errors surface at parse time.
void check_kind(ScenarioKind k, const json& r);

Particle make_particle(const json& r);
GasEnvironment make_gas(const json& r);
TrapConfig make_trap(const json& r);
CavityConfig make_cavity(const json& r);
Axis axis_from_string(const std::string& s);

/// Writes files into one run directory and records their digests.
class Emitter {
 public:
  Emitter(std::filesystem::path dir, OutputFormat format);

  /// stem.csv or stem.json depending on the format. records replaces the JSON form when given.
  void table(const std::string& stem, const io::Table& t, const json& records = nullptr);
  void json_file(const std::string& name, const json& j);

  const std::vector<EmittedFile>& files() const noexcept { return files_; }

 private:
  void write(const std::string& name, const std::string& content);

  std::filesystem::path dir_;
  OutputFormat format_;
  std::vector<EmittedFile> files_;
};

struct RunContext {
  const Scenario& scenario;
  std::uint64_t seed;
  std::string hash;
  Emitter& out;
  std::vector<std::string>& warnings;
};

json run_brownian(RunContext& ctx);
json run_feedback(RunContext& ctx);
json run_cavity_cool(RunContext& ctx);
json run_budget(RunContext& ctx);
json run_fock(RunContext& ctx);
json run_cat(RunContext& ctx);
json run_sense_sweep(RunContext& ctx);
json run_collide(RunContext& ctx);

}  // namespace levitsim::detail
