#include "levitsim/cavity.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "levitsim/errors.hpp"

namespace levitsim {

using constants::kPi;

namespace {

constexpr double kSelfConsistencyTol = 1e-10;

double prefactor(const Particle& p, const CavityConfig& cav, Mode mode) {
  const double vc = mode == Mode::TEM00 ? cav.mode_volume_tem00() : cav.mode_volume_tem01();
  return 1.5 * p.volume() / vc;
}

std::size_t phase_index(Mode m) { return static_cast<std::size_t>(m); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string(what) + " must be > 0");
}

// Cavity pull 2 g^2 |alpha|^2 / omega_m at effective detuning d.
double pull(double d, double g, double drive, double omega_m, double kappa) {
  const double alpha2 = drive * drive / (4.0 * d * d + kappa * kappa);
  return 2.0 * g * g * alpha2 / omega_m;
}

}  // namespace

Axis coupled_axis(Mode m) noexcept {
  switch (m) {
    case Mode::TEM00: return Axis::Z;
    case Mode::TEM01: return Axis::X;
    case Mode::TEM10: return Axis::Y;
  }
  return Axis::Z;
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::TEM00: return "TEM00";
    case Mode::TEM01: return "TEM01";
    case Mode::TEM10: return "TEM10";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "TEM00") return Mode::TEM00;
  if (s == "TEM01") return Mode::TEM01;
  if (s == "TEM10") return Mode::TEM10;
  throw ConfigError("unknown cavity mode '" + s + "' (expected TEM00, TEM01 or TEM10)");
}

double coupling_profile(const Particle& p, const CavityConfig& cav, Mode mode, const Vec3& pos) {
  const double w = cav.waist();
  const double x = pos[0], y = pos[1], z = pos[2];
  const double envelope = std::exp(-2.0 * (x * x + y * y) / (w * w));
  const double c = std::cos(cav.wavenumber() * z + cav.mode_phases()[phase_index(mode)]);
  double transverse = 1.0;
  if (mode == Mode::TEM01) transverse = x * x / (w * w);
  if (mode == Mode::TEM10) transverse = y * y / (w * w);
  return -prefactor(p, cav, mode) * transverse * envelope * c * c * cav.omega_c();
}

double coupling_strength(const Particle& p, const CavityConfig& cav, const TrapConfig& trap,
                         Mode mode, Axis axis, const Vec3& pos) {
  const auto j = static_cast<std::size_t>(axis);
  const double h = 1e-6 * cav.waist();
  if (!(h > 0.0) || pos[j] + h == pos[j]) {
    throw DomainError("coupling_strength: derivative step underflows at this position");
  }
  auto at = [&](double offset) {
    Vec3 q = pos;
    q[j] += offset;
    return coupling_profile(p, cav, mode, q);
  };
  const double derivative =
      (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h);
  return zero_point_fluctuation(p.mass(), trap.omega(axis)) * derivative;
}

double coupling_strength(const Particle& p, const CavityConfig& cav, const TrapConfig& trap,
                         Mode mode, Axis axis) {
  return coupling_strength(p, cav, trap, mode, axis, cav.trap_position());
}

OptoCoupling solve_coupling(double g, const DriveConfig& drive, double omega_m, double kappa) {
  validate(drive);
  require_positive(omega_m, "solve_coupling: omega_m");
  require_positive(kappa, "solve_coupling: kappa");
  const double om = drive.omega;
  auto residual = [&](double d) { return d - drive.delta - pull(d, g, om, omega_m, kappa); };
  const double scale = std::max({std::fabs(drive.delta), kappa, omega_m});

  double d = drive.delta;
  bool converged = false;
  for (int it = 0; it < 10000; ++it) {
    const double next = 0.5 * d + 0.5 * (drive.delta + pull(d, g, om, omega_m, kappa));
    const double step = std::fabs(next - d);
    d = next;
    if (step <= 1e-14 * scale) {
      converged = true;
      break;
    }
  }
  if (!converged || std::fabs(residual(d)) > kSelfConsistencyTol * scale) {
    // The pull is positive and bounded by its value at d = 0, which brackets a root.
    double lo = drive.delta;
    double hi = drive.delta + pull(0.0, g, om, omega_m, kappa);
    for (int it = 0; it < 400 && hi - lo > 1e-15 * scale; ++it) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    d = 0.5 * (lo + hi);
  }
  if (!(std::fabs(residual(d)) <= kSelfConsistencyTol * scale)) {
    throw NumericalError("solve_coupling: self-consistent detuning did not converge");
  }
  OptoCoupling c;
  c.g = g;
  c.delta_eff = d;
  c.alpha_c = std::complex<double>(0.0, om) / std::complex<double>(-kappa, 2.0 * d);
  return c;
}

CoolingResult steady_state(const OptoCoupling& c, double omega_m, double kappa) {
  require_positive(omega_m, "steady_state: omega_m");
  require_positive(kappa, "steady_state: kappa");
  const double d = c.delta_eff;
  const double ad = std::fabs(d);
  const double G2 = std::norm(c.alpha_c) * c.g * c.g;
  CoolingResult r;
  r.s1 = 4.0 * ad * omega_m * G2 * kappa * kappa;
  r.s2 = omega_m * d * d - G2 * ad;
  r.stable = r.s1 > 0.0 && r.s2 > 0.0;
  r.gamma = G2 / (kappa * (1.0 + kappa * kappa / (16.0 * omega_m * omega_m)));
  r.heating = !(d < 0.0);
  if (!r.heating) {
    r.n_final = -((omega_m + d) * (omega_m + d) + 0.25 * kappa * kappa) / (4.0 * omega_m * d);
  }
  r.resolved_sideband = kappa <= 0.1 * omega_m;
  r.weak_coupling = std::sqrt(G2) <= 0.1 * kappa;
  return r;
}

double optimal_detuning(double omega_m, double kappa) {
  return -std::sqrt(omega_m * omega_m + 0.25 * kappa * kappa);
}

std::array<double, 16> drift_matrix(const OptoCoupling& c, double omega_m, double kappa) {
  const double G = c.enhanced();
  const double d = c.delta_eff;
  const double k2 = 0.5 * kappa;
  // H = -d/2 (x_c^2 + p_c^2) + omega_m/2 (x_m^2 + p_m^2) + 2 G x_c x_m, alpha_c phase rotated out.
  return {-k2, -d,   0.0,      0.0,      //
          d,   -k2,  -2.0 * G, 0.0,      //
          0.0, 0.0,  0.0,      omega_m,  //
          -2.0 * G, 0.0, -omega_m, 0.0};
}

CovarianceTrace covariance_dynamics(const OptoCoupling& c, double omega_m, double kappa,
                                    double n_init, const std::vector<double>& t_grid) {
  if (!(n_init >= 0.0)) throw DomainError("covariance_dynamics: n_init must be >= 0");
  if (t_grid.empty()) throw DomainError("covariance_dynamics: empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && t_grid[i] < t_grid[i - 1])) {
      throw DomainError("covariance_dynamics: time grid must be non-negative and sorted");
    }
  }
  const auto ss = steady_state(c, omega_m, kappa);
  if (c.enhanced() > 0.0 && !(ss.s2 > 0.0)) {
    std::ostringstream os;
    os << "covariance_dynamics: stability criterion S2 violated (S2 = " << ss.s2
       << "; requires g|alpha_c| < sqrt(omega_m |delta_eff|))";
    throw InstabilityError(os.str());
  }
  const auto a_raw = drift_matrix(c, omega_m, kappa);
  const Eigen::Matrix4d A = Eigen::Map<const Eigen::Matrix<double, 4, 4, Eigen::RowMajor>>(a_raw.data());
  const auto eig = A.eigenvalues();
  for (int i = 0; i < 4; ++i) {
    if (eig[i].real() > 1e-12 * (omega_m + kappa)) {
      throw InstabilityError(
          "covariance_dynamics: drift matrix has a growing mode (Routh-Hurwitz criterion violated)");
    }
  }

  using State = std::vector<double>;
  State v(16, 0.0);
  v[0] = v[5] = 0.5;
  v[10] = v[15] = n_init + 0.5;
  const double k2 = 0.5 * kappa;
  auto rhs = [&](const State& s, State& ds, double) {
    Eigen::Map<const Eigen::Matrix<double, 4, 4, Eigen::RowMajor>> V(s.data());
    Eigen::Map<Eigen::Matrix<double, 4, 4, Eigen::RowMajor>> dV(ds.data());
    dV = A * V + V * A.transpose();
    dV(0, 0) += k2;
    dV(1, 1) += k2;
  };

  CovarianceTrace out;
  auto observe = [&](const State& s, double t) {
    out.times.push_back(t);
    out.phonons.push_back(0.5 * (s[10] + s[15] - 1.0));
  };
  std::vector<double> times;
  if (t_grid.front() > 0.0) times.push_back(0.0);
  times.insert(times.end(), t_grid.begin(), t_grid.end());
  if (times.size() == 1) {
    observe(v, times.front());
    return out;
  }
  namespace ode = boost::numeric::odeint;
  const double dt0 = 0.01 / (omega_m + kappa + std::fabs(c.delta_eff));
  ode::integrate_times(ode::make_dense_output(1e-12 * (n_init + 1.0), 1e-8,
                                              ode::runge_kutta_dopri5<State>()),
                       rhs, v, times.begin(), times.end(), dt0, observe);
  if (t_grid.front() > 0.0) {
    out.times.erase(out.times.begin());
    out.phonons.erase(out.phonons.begin());
  }
  return out;
}

StateTransfer state_transfer(const OptoCoupling& c, double kappa, double omega_m,
                             double tolerance) {
  require_positive(kappa, "state_transfer: kappa");
  require_positive(omega_m, "state_transfer: omega_m");
  std::ostringstream failed;
  if (std::fabs(c.delta_eff + omega_m) > tolerance * kappa) {
    failed << " |delta_eff + omega_m| = " << std::fabs(c.delta_eff + omega_m)
           << " > " << tolerance << " kappa;";
  }
  if (c.enhanced() > tolerance * kappa) {
    failed << " g|alpha_c| = " << c.enhanced() << " > " << tolerance << " kappa;";
  }
  if (!failed.str().empty()) {
    throw ValidityError("state_transfer: red-sideband transfer invalid:" + failed.str());
  }
  StateTransfer s;
  s.rate = 2.0 * c.g * c.g * std::norm(c.alpha_c) / kappa;
  s.output_map = std::complex<double>(0.0, -2.0 * c.g) * c.alpha_c / std::sqrt(kappa);
  return s;
}

Squeezing squeezing_variance(double kappa, double omega_m) {
  if (!(kappa >= 0.0)) throw DomainError("squeezing_variance: kappa must be >= 0");
  require_positive(omega_m, "squeezing_variance: omega_m");
  const double x = kappa / omega_m;
  Squeezing s;
  s.variance = 5.0 / 16.0 * x * x;
  s.db = 10.0 * std::log10(s.variance);
  return s;
}

std::array<ModeCooling, 3> cooling_3d(const Particle& p, const CavityConfig& cav,
                                      const TrapConfig& trap,
                                      const std::array<DriveConfig, 3>& drives) {
  std::array<ModeCooling, 3> out;
  for (std::size_t j = 0; j < 3; ++j) {
    auto& m = out[j];
    m.mode = static_cast<Mode>(j);
    m.axis = coupled_axis(m.mode);
    const double g = coupling_strength(p, cav, trap, m.mode, m.axis);
    const double w = trap.omega(m.axis);
    m.coupling = solve_coupling(g, drives[j], w, cav.kappa());
    m.result = steady_state(m.coupling, w, cav.kappa());
  }
  return out;
}

}  // namespace levitsim
