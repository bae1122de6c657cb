#include "levitsim/sensing.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "levitsim/errors.hpp"
#include "levitsim/langevin.hpp"
#include "levitsim/noise.hpp"

namespace levitsim {

using constants::kBoltzmann;
using constants::kHbar;
using constants::kPi;

void validate(const SensingScenario& s) {
  if (!(s.omega0 > 0.0)) throw DomainError("SensingScenario: omega0 must be > 0");
  if (!(s.bandwidth > 0.0)) throw DomainError("SensingScenario: bandwidth must be > 0");
  if (!(s.wavelength > 0.0)) throw DomainError("SensingScenario: wavelength must be > 0");
  if (!(s.r_plus >= 0.0)) throw DomainError("SensingScenario: R_plus must be >= 0");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::GasLimited: return "gas-limited";
    case Regime::Crossover: return "crossover";
    case Regime::RecoilLimited: return "recoil-limited";
  }
  return "?";
}

double f_min_basic(double spring_constant, double temperature, double bandwidth, double omega0,
                   double q) {
  if (!(spring_constant > 0.0) || !(temperature >= 0.0) || !(bandwidth > 0.0) ||
      !(omega0 > 0.0) || !(q > 0.0)) {
    throw DomainError("f_min_basic: arguments must be positive");
  }
  if (std::isinf(q)) return 0.0;
  return std::sqrt(4.0 * spring_constant * kBoltzmann * temperature * bandwidth / (omega0 * q));
}

double f_min_damping(double mass, double temperature, double bandwidth, double gamma) {
  if (!(mass > 0.0) || !(temperature >= 0.0) || !(bandwidth > 0.0) || !(gamma >= 0.0)) {
    throw DomainError("f_min_damping: arguments out of range");
  }
  return std::sqrt(4.0 * kBoltzmann * temperature * mass * bandwidth * gamma);
}

SensitivityPoint f_min_recoil(const SensingScenario& s) {
  validate(s);
  const double m = s.particle.mass();
  const double t = s.gas.temperature();
  const double gg = gas_damping(s.particle, s.gas);
  const double gsc = recoil_rate_linear(s.particle, s.omega0, s.wavelength);
  const double heating = gsc + s.r_plus;
  // 4 kB T m b gamma_g (1 + chi) expanded so that gamma_g = 0 stays finite.
  const double f2 = 4.0 * kBoltzmann * t * m * s.bandwidth * gg +
                    4.0 * kHbar * s.omega0 * m * s.bandwidth * heating;
  SensitivityPoint p;
  p.f_min = std::sqrt(f2);
  p.a_min = p.f_min / m;
  const double ni_gg = kBoltzmann * t / (kHbar * s.omega0) * gg;
  p.chi = ni_gg > 0.0 ? heating / ni_gg : (heating > 0.0 ? INFINITY : 0.0);
  p.regime = p.chi < 0.5 ? Regime::GasLimited
                         : (p.chi > 2.0 ? Regime::RecoilLimited : Regime::Crossover);
  return p;
}

double f_min_recoil_limit(const SensingScenario& s) {
  validate(s);
  const double gsc = recoil_rate_linear(s.particle, s.omega0, s.wavelength);
  return std::sqrt(4.0 * kHbar * s.omega0 * s.particle.mass() * s.bandwidth * gsc);
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Radius: return "radius";
    case SweepAxis::Frequency: return "frequency";
    case SweepAxis::Pressure: return "pressure";
    case SweepAxis::Temperature: return "temperature";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  for (auto a : {SweepAxis::Radius, SweepAxis::Frequency, SweepAxis::Pressure,
                 SweepAxis::Temperature}) {
    if (to_string(a) == s) return a;
  }
  throw ConfigError("unknown sweep axis '" + s + "' (expected radius, frequency, pressure or temperature)");
}

SensingScenario with_parameter(const SensingScenario& s, SweepAxis axis, double value) {
  SensingScenario out = s;
  const Particle& p = s.particle;
  switch (axis) {
    case SweepAxis::Radius:
      out.particle = Particle(value, p.density(), p.relative_permittivity());
      break;
    case SweepAxis::Frequency: out.omega0 = value; break;
    case SweepAxis::Pressure: out.gas = s.gas.with_pressure(value); break;
    case SweepAxis::Temperature: out.gas = s.gas.with_temperature(value); break;
  }
  return out;
}

std::vector<SweepPoint> sweep(const SensingScenario& s, SweepAxis axis,
                              const std::vector<double>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("sweep: grid must be strictly increasing");
  }
  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back({x, f_min_recoil(with_parameter(s, axis, x))});
  return out;
}

double scaling_exponent(const SensingScenario& s, SweepAxis axis, double rel_step) {
  double x = 0.0;
  switch (axis) {
    case SweepAxis::Radius: x = s.particle.radius(); break;
    case SweepAxis::Frequency: x = s.omega0; break;
    case SweepAxis::Pressure: x = s.gas.pressure(); break;
    case SweepAxis::Temperature: x = s.gas.temperature(); break;
  }
  if (!(x > 0.0)) throw DomainError("scaling_exponent: parameter must be > 0");
  const double up = std::exp(rel_step), down = std::exp(-rel_step);
  const double fu = f_min_recoil(with_parameter(s, axis, x * up)).f_min;
  const double fd = f_min_recoil(with_parameter(s, axis, x * down)).f_min;
  return (std::log(fu) - std::log(fd)) / (2.0 * rel_step);
}

void write_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
  os << "x_value,f_min_N_per_rtHz,a_min,chi,regime\n" << std::setprecision(10);
  for (const auto& p : points) {
    os << p.x << ',' << p.point.f_min << ',' << p.point.a_min << ',' << p.point.chi << ','
       << to_string(p.point.regime) << '\n';
  }
}

std::vector<double> displacement_floor(const CavityConfig& cav, const Particle& p, double power,
                                       const std::vector<double>& omega) {
  if (!(power > 0.0)) throw DomainError("displacement_floor: power must be > 0");
  const double wc = cav.omega_c();
  const double g = 0.75 * p.volume() / cav.mode_volume_tem00() * p.clausius_mossotti() * wc;
  const double flux = power / (kHbar * wc);
  const double kappa = cav.kappa();
  const double dc = kappa / (4.0 * cav.wavenumber() * g * std::sqrt(flux));
  std::vector<double> out;
  out.reserve(omega.size());
  for (double w : omega) out.push_back(dc * std::sqrt(1.0 + 4.0 * w * w / (kappa * kappa)));
  return out;
}

double yukawa(double m1, double m2, double r, double alpha, double lambda_y) {
  if (!(r > 0.0) || !(lambda_y > 0.0)) throw DomainError("yukawa: r and lambda must be > 0");
  return -constants::kGravitation * m1 * m2 / r * (1.0 + alpha * std::exp(-r / lambda_y));
}

double yukawa_scale(double density, double alpha, double lambda_y) {
  if (!(lambda_y > 0.0)) throw DomainError("yukawa_scale: lambda must be > 0");
  return constants::kGravitation * density * density * alpha * std::pow(lambda_y, 4);
}

double field_equivalent(double f_min, double charge) {
  if (charge == 0.0) throw DomainError("field_equivalent: charge must be non-zero");
  return f_min / std::fabs(charge);
}

double charge_from_surface_field(double radius, double field) {
  if (!(radius > 0.0)) throw DomainError("charge_from_surface_field: radius must be > 0");
  return 4.0 * kPi * constants::kEpsilon0 * radius * radius * field;
}

}  // namespace levitsim
