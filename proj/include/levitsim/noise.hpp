#pragma once

#include <string>

#include "levitsim/model.hpp"

namespace levitsim {

/// Laser-noise samples at the frequencies the heating formulas consume.
struct NoiseInputs {
  double s_eps = 0.0;       // fractional intensity noise at 2 omega [1/Hz]
  double s_x = 0.0;         // trap-centre pointing noise at omega [m^2/Hz]
  double linewidth = 0.0;   // laser linewidth Gamma_L [rad/s]
  double gamma_c = 0.0;     // phase-noise correlation rate [rad/s]
  double n_c = 0.0;         // intracavity photon number
};

void validate(const NoiseInputs& in);

struct RecoilRates {
  double gamma_sc = 0.0;  // (2/5)(omega_r / omega_m) R_sc [1/s]
  double r_sc = 0.0;      // photon scattering rate [1/s]
  double omega_r = 0.0;   // recoil frequency hbar k^2 / (2 rho V) [rad/s]
  double phi = 0.0;       // (4 pi^2 / 5) CM V / lambda^3
};

/// Photon-recoil heating from the trapping light. omega_m is the trap frequency of
/// the chosen axis; omega_c is the photon frequency used in the scattering rate.
RecoilRates recoil_heating(const Particle& p, const TrapConfig& trap, double omega_c,
                           Axis axis = Axis::Z);

/// gamma_sc of recoil_heating.
double recoil_rate_trap(const Particle& p, const TrapConfig& trap, double omega_c,
                     Axis axis = Axis::Z);

/// Alternative recoil rate (2/5)(pi^2 omega_0 V / lambda^3) CM, linear in the trap frequency.
/// This is the variant the force-sensing estimates use.
double recoil_rate_linear(const Particle& p, double omega_0, double wavelength);

/// (pi/2) omega^2 S_eps(2 omega) [1/s].
double intensity_heating(double omega, double s_eps);

/// (pi/2) m omega^4 S_x(omega) / (hbar omega) [phonons/s].
double pointing_heating(double mass, double omega, double s_x);

/// Lower bound n_c (Gamma_L / kappa) gamma_c^2 / (gamma_c^2 + omega^2) on the phonon number.
double phase_noise_floor(double n_c, double linewidth, double gamma_c, double kappa,
                         double omega);

enum class Channel { Gas, Recoil, Intensity, Pointing };

std::string to_string(Channel c);

struct HeatingBudget {
  double gamma_gas = 0.0;
  double gamma_recoil_trap = 0.0;
  double gamma_recoil_linear = 0.0;
  double recoil_ratio = 0.0;  // trap / linear, NaN when both vanish
  double gamma_intensity = 0.0;
  double gamma_pointing = 0.0;
  double n_ph_floor = 0.0;
  Channel dominant = Channel::Gas;
};

/// All channels for one axis. dominant is the argmax of gas, recoil (trap form),
/// intensity and pointing; ties resolve in that order.
HeatingBudget budget(const Particle& p, const GasEnvironment& gas, const TrapConfig& trap,
                     const CavityConfig& cav, const NoiseInputs& inputs, Axis axis = Axis::Z);

}  // namespace levitsim
