#include "levitsim/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "levitsim/errors.hpp"
#include "levitsim/rng.hpp"

namespace levitsim {

using constants::kBoltzmann;
using constants::kPi;

namespace {

constexpr double kMaxSteps = 1e12;

std::size_t index(Axis a) { return static_cast<std::size_t>(a); }

void validate(const OscillatorParams& p) {
  if (!(p.mass > 0.0)) throw DomainError("simulate: mass must be > 0");
  if (!(p.temperature >= 0.0)) throw DomainError("simulate: temperature must be >= 0");
  if (!(p.gamma0 >= 0.0)) throw DomainError("simulate: gamma0 must be >= 0");
  for (std::size_t a = 0; a < 3; ++a) {
    if (!(p.omega[a] > 0.0)) throw DomainError("simulate: trap frequencies must be > 0");
    if (!(p.gamma_cool[a] >= 0.0)) throw DomainError("simulate: feedback damping must be >= 0");
  }
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n <= 1) return w;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return w;
}

}  // namespace

OscillatorParams OscillatorParams::from(const Particle& p, const GasEnvironment& g,
                                        const TrapConfig& trap, const FeedbackConfig& fb) {
  return {p.mass(), g.temperature(), gas_damping(p, g), trap.omega(), fb.gamma_cool};
}

double OscillatorParams::gamma_total(Axis a) const noexcept {
  return gamma0 + gamma_cool[index(a)];
}

double OscillatorParams::effective_temperature(Axis a) const noexcept {
  const double total = gamma_total(a);
  return total > 0.0 ? temperature * gamma0 / total : temperature;
}

std::vector<double> Trajectory::positions(Axis a) const {
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(),
                 [i = index(a)](const PhaseSample& s) { return s.position[i]; });
  return out;
}

std::vector<double> Trajectory::velocities(Axis a) const {
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(),
                 [i = index(a)](const PhaseSample& s) { return s.velocity[i]; });
  return out;
}

double gas_damping(const Particle& p, const GasEnvironment& g) {
  return 16.0 / kPi * g.pressure() / (g.mean_speed() * p.radius() * p.density());
}

double max_step(const OscillatorParams& params) {
  double limit = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < 3; ++a) {
    limit = std::min(limit, 1.0 / params.omega[a]);
    const double total = params.gamma0 + params.gamma_cool[a];
    if (total > 0.0) limit = std::min(limit, 1.0 / total);
  }
  return limit / 20.0;
}

Trajectory simulate(const OscillatorParams& params, double duration, double dt, std::uint64_t seed,
                    const SimulationOptions& options) {
  validate(params);
  if (!(dt > 0.0) || !(duration > 0.0)) throw DomainError("simulate: dt and duration must be > 0");
  if (options.record_stride == 0) throw DomainError("simulate: record_stride must be >= 1");
  const double limit = max_step(params);
  if (dt > limit * (1.0 + 1e-12)) {
    throw StepSizeError("simulate: dt = " + std::to_string(dt) +
                        " s exceeds the stable step " + std::to_string(limit) + " s");
  }
  const double record_dt = dt * static_cast<double>(options.record_stride);
  const double steps = duration / dt;
  if (!std::isfinite(steps) || steps > kMaxSteps) {
    throw StepSizeError("simulate: duration/dt exceeds the step-count guard");
  }
  const auto records = static_cast<std::size_t>(std::llround(duration / record_dt));
  if (records == 0) throw DomainError("simulate: duration shorter than one recorded sample");

  Trajectory traj;
  traj.dt = record_dt;
  traj.seed = seed;
  traj.scenario_hash = options.scenario_hash;
  traj.samples.resize(records);

  for (std::size_t a = 0; a < 3; ++a) {
    CounterRng rng(seed, a);
    const double omega2 = params.omega[a] * params.omega[a];
    const double gamma = params.gamma0 + params.gamma_cool[a];
    const double t_eff = gamma > 0.0 ? params.temperature * params.gamma0 / gamma : 0.0;
    const double v_var = kBoltzmann * t_eff / params.mass;
    const double decay = std::exp(-gamma * dt);
    const double kick = options.noise_scale * std::sqrt(v_var * (1.0 - decay * decay));
    const double half = 0.5 * dt;

    double x, v;
    if (options.initial) {
      x = options.initial->position[a];
      v = options.initial->velocity[a];
    } else {
      x = std::sqrt(v_var / omega2) * rng.gaussian();
      v = std::sqrt(v_var) * rng.gaussian();
    }
    for (std::size_t r = 0; r < records; ++r) {
      for (std::size_t s = 0; s < options.record_stride; ++s) {
        v -= half * omega2 * x;
        x += half * v;
        v = decay * v + kick * rng.gaussian();
        x += half * v;
        v -= half * omega2 * x;
      }
      traj.samples[r].position[a] = x;
      traj.samples[r].velocity[a] = v;
    }
  }
  return traj;
}

Trajectory simulate(const Particle& p, const GasEnvironment& g, const TrapConfig& trap,
                    const FeedbackConfig& fb, double duration, double dt, std::uint64_t seed,
                    const SimulationOptions& options) {
  return simulate(OscillatorParams::from(p, g, trap, fb), duration, dt, seed, options);
}

VelocityEstimate instantaneous_velocity(const Trajectory& traj, double window,
                                        std::optional<Axis> axis, double bin_width) {
  if (!(window >= traj.dt * (1.0 - 1e-12))) {
    throw DomainError("instantaneous_velocity: window must be >= the sample spacing");
  }
  const auto lag = static_cast<std::size_t>(std::max<long long>(1, std::llround(window / traj.dt)));
  const double span = static_cast<double>(lag) * traj.dt;

  VelocityEstimate out;
  std::vector<Axis> axes;
  if (axis) {
    axes.push_back(*axis);
  } else {
    axes = {Axis::X, Axis::Y, Axis::Z};
  }
  for (Axis a : axes) {
    const std::size_t i = index(a);
    for (std::size_t k = 0; k + lag < traj.samples.size(); k += lag) {
      out.samples.push_back((traj.samples[k + lag].position[i] - traj.samples[k].position[i]) /
                            span);
    }
  }
  if (out.samples.empty()) throw DomainError("instantaneous_velocity: trajectory too short");

  double sum2 = 0.0;
  double vmax = 0.0;
  for (double v : out.samples) {
    sum2 += v * v;
    vmax = std::max(vmax, std::fabs(v));
  }
  out.v_rms = std::sqrt(sum2 / static_cast<double>(out.samples.size()));

  Histogram& h = out.histogram;
  h.bin_width = bin_width > 0.0 ? bin_width : 0.1 * out.v_rms;
  if (!(h.bin_width > 0.0)) {
    // All samples identical; one bin around the common value.
    h.bin_width = std::max(std::fabs(out.samples.front()), 1.0) * 1e-6;
  }
  const double reach = std::max(5.0 * out.v_rms, vmax);
  const auto half_bins = static_cast<std::size_t>(std::ceil(reach / h.bin_width)) + 1;
  // Odd bin count with the central bin centred on zero.
  h.lower = -(static_cast<double>(half_bins) + 0.5) * h.bin_width;
  h.counts.assign(2 * half_bins + 1, 0);
  for (double v : out.samples) {
    const auto b = static_cast<std::size_t>(std::floor((v - h.lower) / h.bin_width));
    if (b < h.counts.size()) ++h.counts[b];
  }
  return out;
}

double Spectrum::integrated_variance() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < frequencies.size(); ++i) {
    sum += 0.5 * (values[i] + values[i - 1]) * (frequencies[i] - frequencies[i - 1]);
  }
  return sum / kPi;
}

Spectrum analytic_psd(double mass, double temperature, double gamma, double omega,
                      const std::vector<double>& omega_grid) {
  if (!(mass > 0.0) || !(temperature > 0.0) || !(gamma > 0.0) || !(omega > 0.0)) {
    throw DomainError("analytic_psd: all parameters must be > 0");
  }
  Spectrum s;
  s.frequencies = omega_grid;
  s.values.reserve(omega_grid.size());
  const double scale = 2.0 * kBoltzmann * temperature / mass;
  const double w02 = omega * omega;
  for (double w : omega_grid) {
    const double d = w02 - w * w;
    s.values.push_back(scale * gamma / (d * d + w * w * gamma * gamma));
  }
  s.estimator.kind = SpectrumEstimator::Kind::Analytic;
  return s;
}

Spectrum estimate_psd(const std::vector<double>& series, double dt, const WelchOptions& options) {
  if (!(dt > 0.0)) throw DomainError("estimate_psd: dt must be > 0");
  if (!(options.overlap >= 0.0 && options.overlap < 1.0)) {
    throw DomainError("estimate_psd: overlap must lie in [0, 1)");
  }
  std::size_t length = options.segment_length;
  if (length == 0) {
    // 16 segments at the requested overlap.
    length = static_cast<std::size_t>(static_cast<double>(series.size()) /
                                      (1.0 + 15.0 * (1.0 - options.overlap)));
  }
  if (length < 8 || series.size() < 2 * length) {
    throw DomainError("estimate_psd: trajectory must hold at least two segments of >= 8 samples");
  }
  const auto step_overlap = static_cast<std::size_t>(std::floor(length * options.overlap));
  const std::size_t hop = std::max<std::size_t>(1, length - step_overlap);

  const std::vector<double> window = hann_window(length);
  double norm = 0.0;
  for (double w : window) norm += w * w;

  const std::size_t bins = length / 2 + 1;
  std::vector<double> acc(bins, 0.0);
  std::size_t segments = 0;

  Eigen::FFT<double> fft;
  std::vector<double> buf(length);
  std::vector<std::complex<double>> spec;
  for (std::size_t start = 0; start + length <= series.size(); start += hop) {
    double m = 0.0;
    for (std::size_t i = 0; i < length; ++i) m += series[start + i];
    m /= static_cast<double>(length);
    for (std::size_t i = 0; i < length; ++i) buf[i] = (series[start + i] - m) * window[i];
    fft.fwd(spec, buf);
    for (std::size_t k = 0; k < bins; ++k) acc[k] += std::norm(spec[k]);
    ++segments;
  }

  Spectrum s;
  s.frequencies.resize(bins);
  s.values.resize(bins);
  const double dw = 2.0 * kPi / (static_cast<double>(length) * dt);
  const double scale = dt / (norm * static_cast<double>(segments));
  for (std::size_t k = 0; k < bins; ++k) {
    s.frequencies[k] = dw * static_cast<double>(k);
    s.values[k] = acc[k] * scale;
  }
  s.estimator = {SpectrumEstimator::Kind::Welch, length, options.overlap, segments, "hann"};
  return s;
}

Spectrum estimate_psd(const Trajectory& traj, Axis axis, const WelchOptions& options) {
  return estimate_psd(traj.positions(axis), traj.dt, options);
}

namespace {

struct LogModel {
  double log_prefactor;  // log(2 kB / M)

  // Parameters: (log T, log Gamma, log Omega).
  double value(const Eigen::Vector3d& p, double w) const {
    const double g = std::exp(p[1]);
    const double o2 = std::exp(2.0 * p[2]);
    const double d = (o2 - w * w) * (o2 - w * w) + w * w * g * g;
    return log_prefactor + p[0] + p[1] - std::log(d);
  }

  Eigen::RowVector3d gradient(const Eigen::Vector3d& p, double w) const {
    const double g = std::exp(p[1]);
    const double o2 = std::exp(2.0 * p[2]);
    const double diff = o2 - w * w;
    const double d = diff * diff + w * w * g * g;
    return {1.0, 1.0 - 2.0 * w * w * g * g / d, -4.0 * diff * o2 / d};
  }
};

}  // namespace

ModeFit fit_mode(const Spectrum& spectrum, double mass, const FitOptions& options) {
  if (!(mass > 0.0)) throw DomainError("fit_mode: mass must be > 0");
  const auto& w = spectrum.frequencies;
  const auto& s = spectrum.values;
  if (w.size() != s.size() || w.size() < 8) throw DomainError("fit_mode: spectrum too short");

  // Initial guess from the peak location and its half-maximum width.
  std::size_t peak = 1;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (w[i] > 0.0 && s[i] > s[peak]) peak = i;
  }
  const double half = 0.5 * s[peak];
  std::size_t lo = peak, hi = peak;
  while (lo > 1 && s[lo] > half) --lo;
  while (hi + 1 < s.size() && s[hi] > half) ++hi;
  const double omega0 = w[peak];
  double gamma0 = w[hi] - w[lo];
  if (!(gamma0 > 0.0)) gamma0 = 0.5 * omega0;
  const double t0 = s[peak] * mass * omega0 * omega0 * gamma0 / (2.0 * kBoltzmann);

  std::vector<double> fw, fy;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >= omega0 / options.window_factor && w[i] <= omega0 * options.window_factor &&
        s[i] > 0.0) {
      fw.push_back(w[i]);
      fy.push_back(std::log(s[i]));
    }
  }
  if (fw.size() < 4) throw FitError("fit_mode: fewer than four bins in the fit window", 0.0);

  const LogModel model{std::log(2.0 * kBoltzmann / mass)};
  const std::size_t n = fw.size();
  Eigen::Vector3d p(std::log(t0), std::log(gamma0), std::log(omega0));

  auto residuals = [&](const Eigen::Vector3d& q) {
    Eigen::VectorXd r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = model.value(q, fw[i]) - fy[i];
    return r;
  };

  Eigen::VectorXd r = residuals(p);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  bool converged = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    Eigen::MatrixXd jac(n, 3);
    for (std::size_t i = 0; i < n; ++i) jac.row(i) = model.gradient(p, fw[i]);
    const Eigen::Vector3d grad = jac.transpose() * r;
    const double scale = jac.norm() * r.norm();
    if (grad.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance * std::max(scale, 1e-300)) {
      converged = true;
      break;
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    bool improved = false;
    while (mu < 1e20) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() += mu * jtj.diagonal();
      const Eigen::Vector3d step = a.ldlt().solve(-grad);
      const Eigen::Vector3d trial = p + step;
      const Eigen::VectorXd rt = residuals(trial);
      const double ct = rt.squaredNorm();
      if (std::isfinite(ct) && ct <= cost) {
        const bool tiny = step.norm() <= 1e-14 * (1.0 + p.norm());
        p = trial;
        r = rt;
        cost = ct;
        mu = std::max(mu / 10.0, 1e-15);
        improved = true;
        if (tiny) converged = true;
        break;
      }
      mu *= 10.0;
    }
    if (!improved || converged) {
      // No descent direction left: the gradient is at round-off level.
      converged = true;
      break;
    }
  }
  const double residual = std::sqrt(cost / static_cast<double>(n));
  if (!converged) {
    throw FitError("fit_mode: no convergence after " + std::to_string(it) + " iterations",
                   residual);
  }
  return {std::exp(p[0]), std::exp(p[1]), std::exp(p[2]), residual, it};
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  const auto old = os.precision(17);
  os << "t,x,y,z,vx,vy,vz\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    os << traj.dt * static_cast<double>(i + 1) << ',' << s.position[0] << ',' << s.position[1]
       << ',' << s.position[2] << ',' << s.velocity[0] << ',' << s.velocity[1] << ','
       << s.velocity[2] << '\n';
  }
  os.precision(old);
}

void write_csv(std::ostream& os, const Spectrum& spectrum) {
  const auto old = os.precision(17);
  os << "omega_rad_s,psd_m2_s\n";
  for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
    os << spectrum.frequencies[i] << ',' << spectrum.values[i] << '\n';
  }
  os.precision(old);
}

}  // namespace levitsim
