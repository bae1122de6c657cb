#include "levitsim/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "levitsim/errors.hpp"

namespace levitsim::io {

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json cooling_record(const OptoCoupling& c, const CoolingResult& r) {
  json j;
  j["g"] = c.g;
  j["alpha_c"] = {c.alpha_c.real(), c.alpha_c.imag()};
  j["delta_eff"] = c.delta_eff;
  j["n_final"] = r.n_final ? finite_or_null(*r.n_final) : json(nullptr);
  j["gamma"] = r.gamma;
  j["s1"] = r.s1;
  j["s2"] = r.s2;
  j["stable"] = r.stable;
  return j;
}

json to_json(const HeatingBudget& b) {
  json j;
  j["gamma_gas"] = b.gamma_gas;
  j["gamma_recoil_trap"] = b.gamma_recoil_trap;
  j["gamma_recoil_linear"] = b.gamma_recoil_linear;
  j["gamma_intensity"] = b.gamma_intensity;
  j["gamma_pointing"] = b.gamma_pointing;
  j["n_ph_floor"] = b.n_ph_floor;
  j["dominant"] = to_string(b.dominant);
  return j;
}

json to_json(const SpinPhononState& s) {
  json j;
  j["dim"] = s.dim();
  j["spin_basis"] = to_string(s.basis());
  j["levels"] = s.levels();
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
    amps.push_back(s.amplitudes()[i].real());
    amps.push_back(s.amplitudes()[i].imag());
  }
  j["amplitudes"] = std::move(amps);
  return j;
}

SpinPhononState state_from_json(const json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const auto name = j.at("spin_basis").get<std::string>();
    SpinBasis basis;
    if (name == to_string(SpinBasis::Dressed)) {
      basis = SpinBasis::Dressed;
    } else if (name == to_string(SpinBasis::Triplet)) {
      basis = SpinBasis::Triplet;
    } else {
      throw ConfigError("state dump: unknown spin_basis '" + name + "'");
    }
    SpinPhononState s(basis, dim);
    const auto& amps = j.at("amplitudes");
    if (amps.size() != 2 * spin_levels(basis) * dim) {
      throw ConfigError("state dump: expected " + std::to_string(2 * spin_levels(basis) * dim) +
                        " amplitude entries, got " + std::to_string(amps.size()));
    }
    for (std::size_t i = 0; i < amps.size() / 2; ++i) {
      s.amplitudes()[static_cast<Eigen::Index>(i)] = {amps[2 * i].get<double>(),
                                                      amps[2 * i + 1].get<double>()};
    }
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("state dump: ") + e.what());
  }
}

json quantity(double value, std::string_view unit) {
  json j;
  j["value"] = finite_or_null(value);
  j["unit"] = std::string(unit);
  return j;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("Table::add_row: row width does not match the header");
  }
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              os << format_double(v);
            } else {
              os << v;
            }
          },
          row[i]);
    }
    os << '\n';
  }
}

json to_json(const Table& t) {
  json arr = json::array();
  for (const auto& row : t.rows) {
    json rec = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              rec[t.columns[i]] = finite_or_null(v);
            } else {
              rec[t.columns[i]] = v;
            }
          },
          row[i]);
    }
    arr.push_back(std::move(rec));
  }
  return arr;
}

namespace {

std::string digest_hex(const unsigned char* md, unsigned int len) {
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(md[i]);
  return os.str();
}

struct MdCtx {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  ~MdCtx() { EVP_MD_CTX_free(ctx); }
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  return digest_hex(md, len);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("sha256: cannot open " + path.string());
  MdCtx c;
  if (!c.ctx || EVP_DigestInit_ex(c.ctx, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: init failed");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(c.ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(c.ctx, md, &len);
  return digest_hex(md, len);
}

}  // namespace levitsim::io
