#include "levitsim/noise.hpp"

#include <cmath>
#include <limits>

#include "levitsim/errors.hpp"
#include "levitsim/langevin.hpp"

namespace levitsim {

using constants::kHbar;
using constants::kPi;

namespace {

void non_negative(double v, const char* what) {
  if (!(v >= 0.0)) throw DomainError(std::string(what) + " must be >= 0");
}

}  // namespace

void validate(const NoiseInputs& in) {
  non_negative(in.s_eps, "NoiseInputs.s_eps");
  non_negative(in.s_x, "NoiseInputs.s_x");
  non_negative(in.linewidth, "NoiseInputs.linewidth");
  non_negative(in.gamma_c, "NoiseInputs.gamma_c");
  non_negative(in.n_c, "NoiseInputs.n_c");
}

RecoilRates recoil_heating(const Particle& p, const TrapConfig& trap, double omega_c, Axis axis) {
  if (!(omega_c > 0.0)) throw DomainError("recoil_heating: omega_c must be > 0");
  const double lambda = trap.wavelength();
  const double k = trap.wavenumber();
  const double v = p.volume();
  const double cm = p.clausius_mossotti();
  RecoilRates r;
  r.omega_r = kHbar * k * k / (2.0 * p.mass());
  r.r_sc = 24.0 * kPi * kPi * kPi * trap.intensity() / std::pow(lambda, 4) * v * v /
           (kHbar * omega_c) * cm * cm;
  r.gamma_sc = 0.4 * r.omega_r / trap.omega(axis) * r.r_sc;
  r.phi = 4.0 * kPi * kPi / 5.0 * cm * v / (lambda * lambda * lambda);
  return r;
}

double recoil_rate_trap(const Particle& p, const TrapConfig& trap, double omega_c, Axis axis) {
  return recoil_heating(p, trap, omega_c, axis).gamma_sc;
}

double recoil_rate_linear(const Particle& p, double omega_0, double wavelength) {
  if (!(omega_0 > 0.0) || !(wavelength > 0.0)) {
    throw DomainError("recoil_rate_linear: omega_0 and wavelength must be > 0");
  }
  return 0.4 * kPi * kPi * omega_0 * p.volume() / std::pow(wavelength, 3) * p.clausius_mossotti();
}

double intensity_heating(double omega, double s_eps) {
  non_negative(omega, "intensity_heating: omega");
  non_negative(s_eps, "intensity_heating: S_eps");
  return 0.5 * kPi * omega * omega * s_eps;
}

double pointing_heating(double mass, double omega, double s_x) {
  if (!(mass > 0.0) || !(omega > 0.0)) {
    throw DomainError("pointing_heating: mass and omega must be > 0");
  }
  non_negative(s_x, "pointing_heating: S_x");
  return 0.5 * kPi * mass * std::pow(omega, 4) * s_x / (kHbar * omega);
}

double phase_noise_floor(double n_c, double linewidth, double gamma_c, double kappa,
                         double omega) {
  non_negative(n_c, "phase_noise_floor: n_c");
  non_negative(linewidth, "phase_noise_floor: Gamma_L");
  non_negative(gamma_c, "phase_noise_floor: gamma_c");
  if (!(kappa > 0.0)) throw DomainError("phase_noise_floor: kappa must be > 0");
  const double g2 = gamma_c * gamma_c;
  if (g2 == 0.0) return 0.0;
  return n_c * (linewidth / kappa) * g2 / (g2 + omega * omega);
}

std::string to_string(Channel c) {
  switch (c) {
    case Channel::Gas: return "gas";
    case Channel::Recoil: return "recoil";
    case Channel::Intensity: return "intensity";
    case Channel::Pointing: return "pointing";
  }
  return "?";
}

HeatingBudget budget(const Particle& p, const GasEnvironment& gas, const TrapConfig& trap,
                     const CavityConfig& cav, const NoiseInputs& inputs, Axis axis) {
  validate(inputs);
  const double w = trap.omega(axis);
  HeatingBudget b;
  b.gamma_gas = gas_damping(p, gas);
  b.gamma_recoil_trap = recoil_rate_trap(p, trap, cav.omega_c(), axis);
  b.gamma_recoil_linear = recoil_rate_linear(p, w, trap.wavelength());
  b.recoil_ratio = b.gamma_recoil_linear > 0.0 ? b.gamma_recoil_trap / b.gamma_recoil_linear
                                           : std::numeric_limits<double>::quiet_NaN();
  b.gamma_intensity = intensity_heating(w, inputs.s_eps);
  b.gamma_pointing = pointing_heating(p.mass(), w, inputs.s_x);
  b.n_ph_floor = phase_noise_floor(inputs.n_c, inputs.linewidth, inputs.gamma_c, cav.kappa(), w);

  double best = b.gamma_gas;
  b.dominant = Channel::Gas;
  const std::pair<double, Channel> others[] = {{b.gamma_recoil_trap, Channel::Recoil},
                                               {b.gamma_intensity, Channel::Intensity},
                                               {b.gamma_pointing, Channel::Pointing}};
  for (const auto& [rate, channel] : others) {
    if (rate > best) {
      best = rate;
      b.dominant = channel;
    }
  }
  return b;
}

}  // namespace levitsim
