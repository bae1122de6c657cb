#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levitsim/model.hpp"

namespace levitsim {

struct SensingScenario {
  Particle particle;
  GasEnvironment gas;
  double omega0 = 0.0;           // trap frequency [rad/s]
  double bandwidth = 1.0;        // [Hz]
  double wavelength = 1064e-9;   // trap laser [m]
  double r_plus = 0.0;           // [1/s]
  std::optional<CavityConfig> cavity;
};

void validate(const SensingScenario& s);

enum class Regime { GasLimited, Crossover, RecoilLimited };

std::string to_string(Regime r);

struct SensitivityPoint {
  double f_min = 0.0;  // [N / sqrt(Hz)] at the scenario bandwidth
  double a_min = 0.0;  // f_min / m
  double chi = 0.0;
  Regime regime = Regime::GasLimited;
};

/// [4 k kB T b / (omega0 Q)]^{1/2}.
double f_min_basic(double spring_constant, double temperature, double bandwidth, double omega0,
                   double q);

/// Same bound written as sqrt(4 kB T m b gamma).
double f_min_damping(double mass, double temperature, double bandwidth, double gamma);

/// Thermal force noise with recoil heating:
/// sqrt(4 kB T m b gamma_g (1 + chi)), chi = (gamma_sc + R_+) / (n_i gamma_g), n_i = kB T / (hbar omega0).
/// gamma_sc is the trap-frequency-linear recoil rate. Regime is crossover for chi in [0.5, 2].
SensitivityPoint f_min_recoil(const SensingScenario& s);

/// sqrt(4 hbar omega0 m b gamma_sc), the chi >> 1 limit.
double f_min_recoil_limit(const SensingScenario& s);

enum class SweepAxis { Radius, Frequency, Pressure, Temperature };

std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

/// Copy of the scenario with one parameter replaced.
SensingScenario with_parameter(const SensingScenario& s, SweepAxis axis, double value);

struct SweepPoint {
  double x = 0.0;
  SensitivityPoint point;
};

/// Pointwise f_min_recoil over a sorted grid.
std::vector<SweepPoint> sweep(const SensingScenario& s, SweepAxis axis,
                              const std::vector<double>& grid);

/// d ln F_min / d ln x by central differences at the scenario's current value.
double scaling_exponent(const SensingScenario& s, SweepAxis axis, double rel_step = 1e-4);

void write_csv(std::ostream& os, const std::vector<SweepPoint>& points);

/// Shot-noise displacement floor sqrt(S_z) [m/sqrt(Hz)] on an angular-frequency grid:
/// (kappa / (4 k_c g)) I^{-1/2} sqrt(1 + 4 omega^2 / kappa^2),
/// g = (3V / 4V_c) CM omega_c, I = P_c / (hbar omega_c), V_c the TEM00 volume.
std::vector<double> displacement_floor(const CavityConfig& cav, const Particle& p, double power,
                                       const std::vector<double>& omega);

/// -G m1 m2 / r [1 + alpha exp(-r / lambda)].
double yukawa(double m1, double m2, double r, double alpha, double lambda_y);

/// G rho^2 alpha lambda^4.
double yukawa_scale(double density, double alpha, double lambda_y);

/// F_min / q.
double field_equivalent(double f_min, double charge);

/// Charge giving surface field E on a sphere of radius r: 4 pi eps0 r^2 E.
double charge_from_surface_field(double radius, double field);

}  // namespace levitsim
