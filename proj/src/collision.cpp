#include "levitsim/collision.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "levitsim/errors.hpp"
#include "levitsim/rng.hpp"

namespace levitsim {

using constants::kBoltzmann;
using constants::kHbar;
using constants::kPi;

std::string to_string(Elasticity e) {
  return e == Elasticity::Elastic ? "elastic" : "inelastic";
}

Elasticity elasticity_from_string(const std::string& s) {
  if (s == "elastic") return Elasticity::Elastic;
  if (s == "inelastic") return Elasticity::Inelastic;
  throw ConfigError("unknown elasticity '" + s + "' (expected elastic or inelastic)");
}

void validate(const CollisionScenario& s) {
  if (!(s.omega_j > 0.0)) throw DomainError("CollisionScenario: omega_j must be > 0");
  if (!(s.t_sur > 0.0)) throw DomainError("CollisionScenario: T_sur must be > 0");
  if (!(s.coupling.kappa > 0.0)) throw DomainError("CollisionScenario: kappa must be > 0");
}

double collision_rate(const Particle& p, const GasEnvironment& gas) {
  const double r = p.radius();
  return 2.0 * kPi * r * r * gas.pressure() /
         std::sqrt(kPi * gas.molecule_mass() * kBoltzmann * gas.temperature() / 2.0);
}

PhononKick phonon_kick(const Particle& p, const GasEnvironment& gas, double omega_j,
                       Elasticity elasticity, double t_sur) {
  if (!(omega_j > 0.0)) throw DomainError("phonon_kick: omega_j must be > 0");
  if (!(t_sur >= 0.0)) throw DomainError("phonon_kick: T_sur must be >= 0");
  const double mm = gas.molecule_mass();
  const double t = elasticity == Elasticity::Elastic ? gas.temperature() : t_sur;
  const double quantum = kHbar * omega_j * p.mass() / mm;
  PhononKick k;
  k.n0 = 2.0 * kBoltzmann * t / quantum;
  k.elastic_detectable = 2.0 * kBoltzmann * gas.temperature() > quantum;
  k.inelastic_detectable = kBoltzmann * t_sur > 2.0 * quantum;
  return k;
}

PulseDuration pulse_duration(const OutputCoupling& c, std::optional<double> rate) {
  const double ga = c.g * c.alpha;
  if (ga == 0.0) throw DomainError("pulse_duration: zero coupling gives an infinite pulse");
  if (!(c.kappa > 0.0)) throw DomainError("pulse_duration: kappa must be > 0");
  PulseDuration d;
  d.tau = c.kappa / (4.0 * ga * ga);
  if (rate) d.resolvable = d.tau < 0.1 / *rate;
  return d;
}

CollisionStream simulate_stream(const CollisionScenario& s, double duration, std::uint64_t seed) {
  validate(s);
  if (!(duration > 0.0)) throw DomainError("simulate_stream: duration must be > 0");
  CollisionStream out;
  out.rate = collision_rate(s.particle, s.gas);
  out.n0 = phonon_kick(s.particle, s.gas, s.omega_j, s.elasticity, s.t_sur).n0;
  out.pulse = pulse_duration(s.coupling, out.rate);
  if (!*out.pulse.resolvable) {
    std::ostringstream w;
    w << "pulses overlap: tau = " << out.pulse.tau << " s, 0.1/N = " << 0.1 / out.rate << " s";
    out.warnings.push_back(w.str());
  }
  if (out.rate == 0.0) return out;

  CounterRng arrivals(seed, 0);
  CounterRng kicks(seed, 1);
  CounterRng counts(seed, 2);
  out.events.reserve(static_cast<std::size_t>(out.rate * duration * 1.01) + 16);
  double t = 0.0;
  for (;;) {
    t += arrivals.exponential() / out.rate;
    if (t >= duration) break;
    const double z = kicks.gaussian();
    const double kick = out.n0 * z * z;
    out.events.push_back({t, kick, counts.poisson(kick)});
  }
  return out;
}

double surface_temperature_estimate(const std::vector<CollisionEvent>& events, const Particle& p,
                                    const GasEnvironment& gas, double omega_j) {
  if (events.empty()) throw DomainError("surface_temperature_estimate: no events");
  if (!(omega_j > 0.0)) throw DomainError("surface_temperature_estimate: omega_j must be > 0");
  double sum = 0.0;
  for (const auto& e : events) sum += static_cast<double>(e.photons);
  const double mean = sum / static_cast<double>(events.size());
  return mean * kHbar * omega_j * p.mass() / (2.0 * gas.molecule_mass() * kBoltzmann);
}

void write_csv(std::ostream& os, const std::vector<CollisionEvent>& events) {
  os << "t_s,n_kick,photons\n" << std::setprecision(12);
  for (const auto& e : events) os << e.time << ',' << e.n_kick << ',' << e.photons << '\n';
}

}  // namespace levitsim
