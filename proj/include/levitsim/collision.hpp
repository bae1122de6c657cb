#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levitsim/model.hpp"

namespace levitsim {

enum class Elasticity { Elastic, Inelastic };

std::string to_string(Elasticity e);
Elasticity elasticity_from_string(const std::string& s);

/// Readout coupling of one mechanical mode to the cavity output.
struct OutputCoupling {
  double g = 0.0;      // [rad/s]
  double alpha = 0.0;  // |alpha_j|
  double kappa = 0.0;  // [1/s]
};

struct CollisionScenario {
  Particle particle;
  GasEnvironment gas;
  double omega_j = 0.0;  // [rad/s]
  OutputCoupling coupling;
  double t_sur = 0.0;    // [K]
  Elasticity elasticity = Elasticity::Elastic;
};

void validate(const CollisionScenario& s);

struct CollisionEvent {
  double time = 0.0;        // [s]
  double n_kick = 0.0;      // phonons added along the mode axis
  std::uint64_t photons = 0;
};

/// N = 2 pi r^2 P / sqrt(pi m_m kB T / 2).
double collision_rate(const Particle& p, const GasEnvironment& gas);

struct PhononKick {
  double n0 = 0.0;
  /// 2 kB T_env > hbar omega (m / m_m).
  bool elastic_detectable = false;
  /// kB T_sur > 2 hbar omega (m / m_m).
  bool inelastic_detectable = false;
};

/// Mean kick 2 m_m kB T / (hbar omega m) with T = T_env (elastic) or T_sur (inelastic).
PhononKick phonon_kick(const Particle& p, const GasEnvironment& gas, double omega_j,
                       Elasticity elasticity, double t_sur);

struct PulseDuration {
  double tau = 0.0;
  std::optional<bool> resolvable;  // tau < 0.1 / N when a rate is given
};

/// tau = kappa / (4 g^2 |alpha|^2).
PulseDuration pulse_duration(const OutputCoupling& c, std::optional<double> rate = std::nullopt);

struct CollisionStream {
  std::vector<CollisionEvent> events;
  double rate = 0.0;
  double n0 = 0.0;
  PulseDuration pulse;
  std::vector<std::string> warnings;
};

/// Poisson arrivals at the collision rate. Each event draws v ~ N(0, kB T / m_m),
/// kick = 2 m_m^2 v^2 / (hbar omega m), photons ~ Poisson(kick). Deterministic per seed.
CollisionStream simulate_stream(const CollisionScenario& s, double duration, std::uint64_t seed);

/// Inverts the mean photon count to a temperature. The photon counts follow a negative
/// binomial with shape 1/2, whose maximum-likelihood mean is the sample mean.
double surface_temperature_estimate(const std::vector<CollisionEvent>& events, const Particle& p,
                                    const GasEnvironment& gas, double omega_j);

void write_csv(std::ostream& os, const std::vector<CollisionEvent>& events);

}  // namespace levitsim
