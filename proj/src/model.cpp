#include "levitsim/model.hpp"

#include <cmath>
#include <string>

#include "levitsim/errors.hpp"

namespace levitsim {

using namespace constants;

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

Particle::Particle(double radius, double density, double relative_permittivity)
    : radius_(radius), density_(density), epsilon_(relative_permittivity) {
  require(radius > 0.0 && std::isfinite(radius), "Particle: radius must be > 0");
  require(density > 0.0 && std::isfinite(density), "Particle: density must be > 0");
  require(relative_permittivity > 1.0 && std::isfinite(relative_permittivity),
          "Particle: relative permittivity must be > 1");
}

double Particle::volume() const noexcept { return 4.0 / 3.0 * kPi * radius_ * radius_ * radius_; }

double Particle::mass() const noexcept { return volume() * density_; }

double Particle::clausius_mossotti() const noexcept { return (epsilon_ - 1.0) / (epsilon_ + 2.0); }

double Particle::polarizability() const noexcept {
  return 3.0 * kEpsilon0 * volume() * clausius_mossotti();
}

GasEnvironment::GasEnvironment(double pressure, double temperature, double molecule_mass)
    : pressure_(pressure), temperature_(temperature), molecule_mass_(molecule_mass) {
  require(pressure >= 0.0 && std::isfinite(pressure), "GasEnvironment: pressure must be >= 0");
  require(temperature > 0.0 && std::isfinite(temperature),
          "GasEnvironment: temperature must be > 0");
  require(molecule_mass > 0.0, "GasEnvironment: molecule mass must be > 0");
}

double GasEnvironment::mean_speed() const noexcept {
  return std::sqrt(8.0 * kBoltzmann * temperature_ / (kPi * molecule_mass_));
}

TrapConfig::TrapConfig(Vec3 omega, double wavelength, double intensity)
    : omega_(omega), wavelength_(wavelength), intensity_(intensity) {
  for (double w : omega) require(w > 0.0 && std::isfinite(w), "TrapConfig: omegas must be > 0");
  require(wavelength > 0.0, "TrapConfig: wavelength must be > 0");
  require(intensity >= 0.0, "TrapConfig: intensity must be >= 0");
}

CavityConfig::CavityConfig(double length, double waist, double kappa, double omega_c,
                           Vec3 trap_position, Vec3 mode_phases)
    : length_(length),
      waist_(waist),
      kappa_(kappa),
      omega_c_(omega_c),
      trap_position_(trap_position),
      mode_phases_(mode_phases) {
  require(length > 0.0, "CavityConfig: length must be > 0");
  require(waist > 0.0, "CavityConfig: waist must be > 0");
  require(kappa > 0.0, "CavityConfig: kappa must be > 0");
  require(omega_c > 0.0, "CavityConfig: omega_c must be > 0");
}

double CavityConfig::mode_volume_tem00() const noexcept {
  return kPi / 4.0 * length_ * waist_ * waist_;
}

double CavityConfig::mode_volume_tem01() const noexcept {
  return kPi / 16.0 * length_ * waist_ * waist_;
}

CavityConfig CavityConfig::with_aligned_trap(double length, double waist, double kappa,
                                             double omega_c) {
  return CavityConfig(length, waist, kappa, omega_c, {0.25 * waist, 0.25 * waist, 0.0},
                      {kPi / 4.0, 0.0, 0.0});
}

void validate(const DriveConfig& d) {
  require(d.omega >= 0.0, "DriveConfig: drive strength must be >= 0");
  require(d.power >= 0.0, "DriveConfig: power must be >= 0");
  require(std::isfinite(d.delta), "DriveConfig: detuning must be finite");
}

double mass_of(const Particle& p) noexcept { return p.mass(); }

double zero_point_fluctuation(double mass, double omega) {
  if (!(mass > 0.0) || !(omega > 0.0)) {
    throw DomainError("zero_point_fluctuation: mass and omega must be > 0");
  }
  return std::sqrt(kHbar / (2.0 * mass * omega));
}

double thermal_occupation(double temperature, double omega) {
  if (!(omega > 0.0)) throw DomainError("thermal_occupation: omega must be > 0");
  if (temperature < 0.0) throw DomainError("thermal_occupation: temperature must be >= 0");
  return kBoltzmann * temperature / (kHbar * omega);
}

}  // namespace levitsim
