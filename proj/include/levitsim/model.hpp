#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace levitsim {

/// CODATA 2018 values in SI units.
namespace constants {
inline constexpr double kBoltzmann = 1.380649e-23;        // J/K (exact)
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kEpsilon0 = 8.8541878128e-12;     // F/m
inline constexpr double kBohrMagneton = 9.2740100783e-24; // J/T
inline constexpr double kGravitation = 6.67430e-11;       // m^3 kg^-1 s^-2
inline constexpr double kSpeedOfLight = 299792458.0;      // m/s (exact)
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C (exact)
inline constexpr double kSpinG = 2.0;                     // electron g-factor, fixed at 2
inline constexpr double kPi = std::numbers::pi;

/// Mean mass of an air molecule.
inline constexpr double kAirMoleculeMass = 4.81e-26;  // kg

inline constexpr double kPascalPerTorr = 101325.0 / 760.0;
inline constexpr double kPascalPerMbar = 100.0;
}  // namespace constants

namespace units {
constexpr double torr_to_pa(double p) { return p * constants::kPascalPerTorr; }
constexpr double pa_to_torr(double p) { return p / constants::kPascalPerTorr; }
constexpr double mbar_to_pa(double p) { return p * constants::kPascalPerMbar; }
constexpr double pa_to_mbar(double p) { return p / constants::kPascalPerMbar; }
/// Ordinary frequency [Hz] to angular frequency [rad/s].
constexpr double hz_to_rad(double f) { return 2.0 * constants::kPi * f; }
constexpr double rad_to_hz(double w) { return w / (2.0 * constants::kPi); }
}  // namespace units

using Vec3 = std::array<double, 3>;

enum class Axis : std::size_t { X = 0, Y = 1, Z = 2 };

/// Homogeneous dielectric sphere.
class Particle {
 public:
  /// Throws DomainError unless radius > 0, density > 0 and permittivity > 1.
  Particle(double radius, double density, double relative_permittivity);

  double radius() const noexcept { return radius_; }
  double density() const noexcept { return density_; }
  double relative_permittivity() const noexcept { return epsilon_; }

  double volume() const noexcept;
  double mass() const noexcept;
  /// Clausius-Mossotti factor (eps - 1)/(eps + 2).
  double clausius_mossotti() const noexcept;
  /// Induced polarizability 3 eps0 V (eps - 1)/(eps + 2) [C m^2/V].
  double polarizability() const noexcept;

  bool operator==(const Particle&) const = default;

 private:
  double radius_;
  double density_;
  double epsilon_;
};

class GasEnvironment {
 public:
  GasEnvironment(double pressure, double temperature,
                 double molecule_mass = constants::kAirMoleculeMass);

  double pressure() const noexcept { return pressure_; }
  double temperature() const noexcept { return temperature_; }
  double molecule_mass() const noexcept { return molecule_mass_; }
  /// Mean molecular speed sqrt(8 kB T / (pi m)).
  double mean_speed() const noexcept;

  GasEnvironment with_pressure(double p) const { return {p, temperature_, molecule_mass_}; }
  GasEnvironment with_temperature(double t) const { return {pressure_, t, molecule_mass_}; }

  bool operator==(const GasEnvironment&) const = default;

 private:
  double pressure_;
  double temperature_;
  double molecule_mass_;
};

/// Optical tweezer. omega is indexed by Axis (x, y, z).
class TrapConfig {
 public:
  TrapConfig(Vec3 omega, double wavelength, double intensity);

  const Vec3& omega() const noexcept { return omega_; }
  double omega(Axis a) const noexcept { return omega_[static_cast<std::size_t>(a)]; }
  double wavelength() const noexcept { return wavelength_; }
  double intensity() const noexcept { return intensity_; }
  double wavenumber() const noexcept { return 2.0 * constants::kPi / wavelength_; }
  /// Angular frequency of the trapping light.
  double laser_omega() const noexcept { return wavenumber() * constants::kSpeedOfLight; }

  bool operator==(const TrapConfig&) const = default;

 private:
  Vec3 omega_;
  double wavelength_;
  double intensity_;
};

class CavityConfig {
 public:
  CavityConfig(double length, double waist, double kappa, double omega_c,
               Vec3 trap_position = {0.0, 0.0, 0.0}, Vec3 mode_phases = {0.0, 0.0, 0.0});

  double length() const noexcept { return length_; }
  double waist() const noexcept { return waist_; }
  double kappa() const noexcept { return kappa_; }
  double omega_c() const noexcept { return omega_c_; }
  double wavenumber() const noexcept { return omega_c_ / constants::kSpeedOfLight; }
  /// Trap position (x0, y0, z0).
  const Vec3& trap_position() const noexcept { return trap_position_; }
  /// Standing-wave phases for the TEM00, TEM01 and TEM10 modes.
  const Vec3& mode_phases() const noexcept { return mode_phases_; }

  /// (pi/4) L w^2 for TEM00.
  double mode_volume_tem00() const noexcept;
  /// (pi/16) L w^2 for TEM01 and TEM10.
  double mode_volume_tem01() const noexcept;

  /// Trap point with gradients aligned to the three axes: x0 = y0 = w/4, z0 = 0,
  /// phases (pi/4, 0, 0).
  static CavityConfig with_aligned_trap(double length, double waist, double kappa,
                                        double omega_c);

  bool operator==(const CavityConfig&) const = default;

 private:
  double length_;
  double waist_;
  double kappa_;
  double omega_c_;
  Vec3 trap_position_;
  Vec3 mode_phases_;
};

/// Cooling-laser drive. delta is the laser-cavity detuning omega_l - omega_c,
/// so red-detuned (cooling) drives have delta < 0.
struct DriveConfig {
  double delta = 0.0;
  double omega = 0.0;
  double power = 0.0;
};

void validate(const DriveConfig& d);

double mass_of(const Particle& p) noexcept;

/// sqrt(hbar / (2 m omega)).
double zero_point_fluctuation(double mass, double omega);

/// kB T / (hbar omega).
double thermal_occupation(double temperature, double omega);

}  // namespace levitsim
