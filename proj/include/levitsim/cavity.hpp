#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "levitsim/model.hpp"

namespace levitsim {

/// Transverse cavity modes. TEM00 couples to z, TEM01 to x, TEM10 to y.
enum class Mode { TEM00, TEM01, TEM10 };

/// Displacement axis a mode is read out on at the aligned trap point.
Axis coupled_axis(Mode m) noexcept;

struct OptoCoupling {
  double g = 0.0;                    // single-photon coupling [rad/s]
  std::complex<double> alpha_c{};    // steady intracavity amplitude
  double delta_eff = 0.0;            // effective detuning [rad/s], < 0 cools

  /// Linearized coupling g |alpha_c|.
  double enhanced() const noexcept { return g * std::abs(alpha_c); }
};

struct CoolingResult {
  std::optional<double> n_final;  // empty on the heating side (delta_eff >= 0)
  double gamma = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  bool stable = false;
  bool heating = false;
  /// omega_m >> kappa, reported rather than enforced.
  bool resolved_sideband = false;
  /// g |alpha_c| << kappa.
  bool weak_coupling = false;
};

/// Cavity-induced frequency shift U_j at a particle position [rad/s].
double coupling_profile(const Particle& p, const CavityConfig& cav, Mode mode, const Vec3& pos);

/// g = q_zpf dU/dq on the given axis, by 5-point central differences with step 1e-6 w.
/// q_zpf uses the trap frequency of that axis.
double coupling_strength(const Particle& p, const CavityConfig& cav, const TrapConfig& trap,
                         Mode mode, Axis axis, const Vec3& pos);

/// Same at the configured trap position.
double coupling_strength(const Particle& p, const CavityConfig& cav, const TrapConfig& trap,
                         Mode mode, Axis axis);

/// Self-consistent (alpha_c, delta_eff):
///   delta_eff = delta + 2 g^2 |alpha_c|^2 / omega_m,  alpha_c = i Omega / (2 i delta_eff - kappa).
/// Damped fixed-point iteration with a bracketed bisection fallback.
OptoCoupling solve_coupling(double g, const DriveConfig& drive, double omega_m, double kappa);

/// Sideband-cooling steady state. S1 and S2 are evaluated with |delta_eff|.
CoolingResult steady_state(const OptoCoupling& c, double omega_m, double kappa);

/// Minimum of n_final over delta_eff < 0: -sqrt(omega_m^2 + kappa^2 / 4).
double optimal_detuning(double omega_m, double kappa);

struct CovarianceTrace {
  std::vector<double> times;
  std::vector<double> phonons;
};

/// Integrates the second moments of the linearized (cavity, phonon) system with
/// vacuum optical input, starting from cavity vacuum and a thermal phonon state.
/// Throws InstabilityError when S2 fails or the drift matrix has a growing mode.
CovarianceTrace covariance_dynamics(const OptoCoupling& c, double omega_m, double kappa,
                                    double n_init, const std::vector<double>& t_grid);

/// Quadrature drift matrix of (x_c, p_c, x_m, p_m) and diffusion diag(kappa/2, kappa/2, 0, 0).
std::array<double, 16> drift_matrix(const OptoCoupling& c, double omega_m, double kappa);

struct StateTransfer {
  double rate = 0.0;                  // phonon amplitude decay 2 g^2 |alpha_c|^2 / kappa
  std::complex<double> output_map{};  // a_out = output_map * a_m + a_in
};

/// Red-sideband state transfer to the output field. Throws ValidityError unless
/// |delta_eff + omega_m| <= tolerance * kappa and g |alpha_c| <= tolerance * kappa.
StateTransfer state_transfer(const OptoCoupling& c, double kappa, double omega_m,
                             double tolerance = 0.1);

struct Squeezing {
  double variance = 0.0;  // relative to vacuum
  double db = 0.0;
};

/// Output-light variance (5/16) (kappa / omega_m)^2 of the parametrically driven mode.
Squeezing squeezing_variance(double kappa, double omega_m);

struct ModeCooling {
  Mode mode = Mode::TEM00;
  Axis axis = Axis::Z;
  OptoCoupling coupling;
  CoolingResult result;
};

/// Independent sideband cooling of the three axes, each by its own mode and drive.
/// drives are indexed TEM00, TEM01, TEM10.
std::array<ModeCooling, 3> cooling_3d(const Particle& p, const CavityConfig& cav,
                                      const TrapConfig& trap,
                                      const std::array<DriveConfig, 3>& drives);

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

}  // namespace levitsim
