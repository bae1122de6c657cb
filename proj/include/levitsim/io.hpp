#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "levitsim/cavity.hpp"
#include "levitsim/noise.hpp"
#include "levitsim/spinmech.hpp"

namespace levitsim::io {

using json = nlohmann::ordered_json;

/// {g, alpha_c: [re, im], delta_eff, n_final (null on the heating side), gamma, s1, s2, stable}.
json cooling_record(const OptoCoupling& c, const CoolingResult& r);

/// {gamma_gas, gamma_recoil_trap, gamma_recoil_linear, gamma_intensity, gamma_pointing, n_ph_floor, dominant}.
json to_json(const HeatingBudget& b);

/// {dim, spin_basis, levels, amplitudes: [re0, im0, re1, im1, ...]}.
json to_json(const SpinPhononState& s);
SpinPhononState state_from_json(const json& j);

/// Unit-tagged scalar {value, unit}.
json quantity(double value, std::string_view unit);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-named table written as CSV or as a JSON array of records.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

void write_csv(std::ostream& os, const Table& t);
json to_json(const Table& t);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace levitsim::io
