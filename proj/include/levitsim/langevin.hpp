#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levitsim/model.hpp"

namespace levitsim {

/// Velocity-proportional feedback damping per axis. Zero disables feedback.
struct FeedbackConfig {
  Vec3 gamma_cool{0.0, 0.0, 0.0};
};

/// Physical parameters of the three uncoupled damped oscillators.
struct OscillatorParams {
  double mass = 0.0;
  double temperature = 0.0;  // bath temperature T0
  double gamma0 = 0.0;       // gas damping, also sets the thermal drive
  Vec3 omega{};
  Vec3 gamma_cool{0.0, 0.0, 0.0};

  static OscillatorParams from(const Particle& p, const GasEnvironment& g, const TrapConfig& trap,
                               const FeedbackConfig& fb = {});

  double gamma_total(Axis a) const noexcept;
  /// Effective temperature T0 Gamma0 / Gamma_tot of a feedback-cooled axis.
  double effective_temperature(Axis a) const noexcept;
};

struct PhaseSample {
  Vec3 position{};
  Vec3 velocity{};
};

/// Uniformly sampled state history. dt is the spacing between stored samples.
struct Trajectory {
  double dt = 0.0;
  std::vector<PhaseSample> samples;
  std::uint64_t seed = 0;
  std::string scenario_hash;

  double duration() const noexcept { return dt * static_cast<double>(samples.size()); }
  std::vector<double> positions(Axis a) const;
  std::vector<double> velocities(Axis a) const;
};

struct SimulationOptions {
  /// Integrator steps between stored samples.
  std::size_t record_stride = 1;
  /// Multiplies the thermal drive; 0 gives the deterministic damped oscillator.
  double noise_scale = 1.0;
  /// Initial (position, velocity). Drawn from the stationary distribution when unset.
  std::optional<PhaseSample> initial;
  std::string scenario_hash;
};

/// Rate at which gas collisions damp the centre-of-mass motion,
/// (16/pi) P / (v_mean r rho), free-molecular regime.
double gas_damping(const Particle& p, const GasEnvironment& g);

/// Largest integrator step allowed for these oscillators: min over axes of
/// min(1/Omega, 1/Gamma_tot) / 20.
double max_step(const OscillatorParams& params);

/// Integrates x'' + Gamma_tot x' + Omega^2 x = zeta(t) sqrt(2 kB T0 Gamma0 / M) on each axis.
/// Velocity-Verlet with an exact Ornstein-Uhlenbeck update of the friction and noise part.
/// Each axis draws from its own counter-based stream, so results are bit-reproducible
/// for a fixed (seed, dt, duration).
Trajectory simulate(const OscillatorParams& params, double duration, double dt, std::uint64_t seed,
                    const SimulationOptions& options = {});

Trajectory simulate(const Particle& p, const GasEnvironment& g, const TrapConfig& trap,
                    const FeedbackConfig& fb, double duration, double dt, std::uint64_t seed,
                    const SimulationOptions& options = {});

struct Histogram {
  double lower = 0.0;
  double bin_width = 0.0;
  std::vector<std::size_t> counts;

  double bin_center(std::size_t i) const noexcept {
    return lower + (static_cast<double>(i) + 0.5) * bin_width;
  }
};

struct VelocityEstimate {
  std::vector<double> samples;
  Histogram histogram;
  double v_rms = 0.0;
};

/// Finite-difference velocities (x(t + window) - x(t)) / window over non-overlapping
/// windows. Pools all three axes unless one is given. bin_width <= 0 picks v_rms / 10.
VelocityEstimate instantaneous_velocity(const Trajectory& traj, double window,
                                        std::optional<Axis> axis = std::nullopt,
                                        double bin_width = 0.0);

struct SpectrumEstimator {
  enum class Kind { Analytic, Welch } kind = Kind::Analytic;
  std::size_t segment_length = 0;
  double overlap = 0.0;
  std::size_t segments = 0;
  std::string window;
};

/// Power spectral density on a non-negative angular-frequency grid.
///
/// Values follow the thermal-spectrum normalisation
///   <x^2> = (1/pi) * integral_0^inf S(omega) d omega,
/// i.e. the Fourier transform of the autocorrelation evaluated at omega >= 0.
struct Spectrum {
  std::vector<double> frequencies;  // rad/s, strictly increasing
  std::vector<double> values;       // m^2 s
  SpectrumEstimator estimator;

  /// Trapezoidal (1/pi) * sum S d omega.
  double integrated_variance() const;
};

/// (2 kB T / M) Gamma / ((Omega^2 - w^2)^2 + w^2 Gamma^2) on the grid.
Spectrum analytic_psd(double mass, double temperature, double gamma, double omega,
                      const std::vector<double>& omega_grid);

struct WelchOptions {
  /// Samples per segment. 0 chooses the length giving 16 half-overlapped segments.
  std::size_t segment_length = 0;
  double overlap = 0.5;
};

/// Hann-windowed averaged periodogram of one axis of the trajectory.
Spectrum estimate_psd(const Trajectory& traj, Axis axis, const WelchOptions& options = {});

/// Same estimator on a bare uniformly sampled series.
Spectrum estimate_psd(const std::vector<double>& series, double dt,
                      const WelchOptions& options = {});

struct ModeFit {
  double temperature = 0.0;
  double gamma_total = 0.0;
  double omega = 0.0;
  double residual = 0.0;  // rms of log-spectrum residuals
  int iterations = 0;
};

struct FitOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-10;
  /// Fit window relative to the peak: [peak / window_factor, peak * window_factor].
  double window_factor = 3.0;
};

/// Levenberg-Marquardt fit of the thermal spectrum to log S, returning the mode
/// temperature, total damping and resonance frequency.
ModeFit fit_mode(const Spectrum& spectrum, double mass, const FitOptions& options = {});

void write_csv(std::ostream& os, const Trajectory& traj);
void write_csv(std::ostream& os, const Spectrum& spectrum);

}  // namespace levitsim
