// Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levitsim/cavity.hpp"
#include "levitsim/collision.hpp"
#include "levitsim/langevin.hpp"
#include "levitsim/rng.hpp"
#include "levitsim/sensing.hpp"
#include "levitsim/spinmech.hpp"
#include "levitsim/stats.hpp"

using namespace levitsim;
using constants::kBoltzmann;
using constants::kHbar;
using constants::kPi;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double rel(double a, double b) { return std::fabs(a / b - 1.0); }

const Particle& microsphere() {
  static const Particle p = [] {
    const double r = 1.5e-6, m = 2.23e-14;
    return Particle(r, m / (4.0 / 3.0 * kPi * r * r * r), 2.1);
  }();
  return p;
}

const Particle& diamond() {
  static const Particle p(15e-9, 3500.0, 5.7);
  return p;
}

void thermal_velocity(Outcome& o) {
  const Particle& p = microsphere();
  const GasEnvironment gas(12e3, 297.0);
  const double w = units::hz_to_rad(9095.0);
  const TrapConfig trap({w, w, w}, 1064e-9, 1e9);
  const auto params = OscillatorParams::from(p, gas, trap);
  SimulationOptions opt;
  opt.record_stride = 100;
  const auto traj = simulate(params, 30.0, max_step(params), 1, opt);
  std::vector<double> v;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    const auto va = traj.velocities(a);
    v.insert(v.end(), va.begin(), va.end());
  }
  const double sigma = std::sqrt(kBoltzmann * 297.0 / 2.23e-14);
  const double v_rms = stats::rms(v);
  const auto ks = stats::ks_test(v, [sigma](double x) { return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0))); });
  o.detail << "samples=" << v.size() << " v_rms=" << v_rms * 1e3 << " mm/s ks_p=" << ks.p_value;
  o.require(v.size() >= 1000000, "1e6 samples");
  o.require(rel(v_rms, 0.429e-3) <= 0.02, "v_rms within 2% of 0.429 mm/s");
  o.require(ks.p_value > 0.01, "KS at 1%");
}

void feedback_temperature(Outcome& o) {
  const Particle& p = microsphere();
  const GasEnvironment gas(637.0, 297.0);
  const double g0 = gas_damping(p, gas);
  const double w = units::hz_to_rad(9095.0);
  const TrapConfig trap({units::hz_to_rad(8066.0), w, units::hz_to_rad(2072.0)}, 1064e-9, 1e9);
  FeedbackConfig fb;
  fb.gamma_cool = {0.0, 11.375 * g0, 0.0};
  const auto params = OscillatorParams::from(p, gas, trap, fb);
  const double dt = max_step(params);
  SimulationOptions opt;
  opt.record_stride = 4;
  const std::size_t seg = 1024;
  const auto traj = simulate(p, gas, trap, fb, seg * 64.5 * dt * 4, dt, 4242, opt);
  const auto fit = fit_mode(estimate_psd(traj, Axis::Y, {seg, 0.5}), p.mass());
  const double expected = 297.0 / (1.0 + 11.375);
  o.detail << "T_fit=" << fit.temperature << " K expected=" << expected << " K";
  o.require(rel(fit.temperature, 24.0) <= 0.10, "T within 10% of 24 K");
}

void gas_damping_rate(Outcome& o) {
  const Particle p(50e-9, 2000.0, 2.1);
  const double pa = 1e-10 * 101325.0 / 760.0;
  const double g = gas_damping(p, GasEnvironment(pa, 300.0));
  const double vbar = std::sqrt(8.0 * kBoltzmann * 300.0 / (kPi * constants::kAirMoleculeMass));
  const double oracle = 16.0 * pa / (kPi * vbar * 50e-9 * 2000.0);
  o.detail << "gamma_g=" << g << " 1/s oracle=" << oracle;
  o.require(g > 0.5e-6 && g < 2e-6, "within a factor 2 of 1e-6");
  o.require(rel(g, oracle) < 1e-9, "matches kinetic formula");
}

// Stationary phonon number from A V + V A^T + D = 0 for H = -Delta a'a + w b'b + G (a + a')(b + b').
double lyapunov_phonons(double G, double delta, double w, double kappa) {
  Eigen::Matrix4d a;
  a << -kappa / 2, -delta, 0, 0,
       delta, -kappa / 2, -2 * G, 0,
       0, 0, 0, w,
       -2 * G, 0, -w, 0;
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d(0, 0) = d(1, 1) = kappa / 2;
  const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
  Eigen::Matrix<double, 16, 16> k;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) k.block<4, 4>(4 * i, 4 * j) = id(i, j) * a + a(i, j) * id;
  const Eigen::Matrix<double, 16, 1> vec = k.fullPivLu().solve(-Eigen::Map<Eigen::Matrix<double, 16, 1>>(d.data()));
  const Eigen::Map<const Eigen::Matrix4d> v(vec.data());
  return 0.5 * (v(2, 2) + v(3, 3)) - 0.5;
}

void sideband_limit(Outcome& o) {
  const double w = 1.0, kappa = 0.1 * w, G = 0.1 * kappa;
  OptoCoupling c;
  c.g = G;
  c.alpha_c = 1.0;
  c.delta_eff = -w;
  const auto r = steady_state(c, w, kappa);
  const double limit = std::pow(kappa / (4.0 * w), 2);
  std::vector<double> grid;
  const double rate = 4.0 * G * G / kappa;
  for (int i = 0; i <= 400; ++i) grid.push_back(i * 20.0 / rate / 400.0);
  const auto tr = covariance_dynamics(c, w, kappa, 10.0, grid);
  const double lyap = lyapunov_phonons(G, -w, w, kappa);
  o.detail << "n_final=" << (r.n_final ? *r.n_final : -1.0) << " (k/4w)^2=" << limit
           << " asymptote=" << tr.phonons.back() << " lyapunov=" << lyap;
  o.require(r.n_final.has_value() && rel(*r.n_final, limit) < 1e-9, "n_final formula");
  o.require(rel(tr.phonons.back(), limit) <= 0.20, "covariance asymptote within 20%");
  o.require(rel(tr.phonons.back(), lyap) <= 1e-3, "asymptote matches Lyapunov oracle");
}

void squeezing(Outcome& o) {
  const auto s = squeezing_variance(0.0566, 1.0);
  const double oracle = 10.0 * std::log10(5.0 / 16.0 * 0.0566 * 0.0566);
  o.detail << "db=" << s.db << " oracle=" << oracle;
  o.require(std::fabs(s.db + 30.0) <= 0.1, "-30.0 +/- 0.1 dB");
  o.require(std::fabs(s.db - oracle) < 1e-9, "closed form");
}

double lambda_oracle(double w, double grad) {
  const double a0 = std::sqrt(kHbar / (2.0 * diamond().mass() * w));
  return 2.0 * constants::kBohrMagneton * grad * a0 / kHbar;
}

void coupling_anchors(Outcome& o) {
  const double w1 = 2.0 * kPi * 0.5e6, w2 = 2.0 * kPi * 20e3;
  const double l1 = spin_coupling(diamond(), w1, 1e5) / (2.0 * kPi);
  const double l2 = spin_coupling(diamond(), w2, 3e4) / (2.0 * kPi);
  o.detail << "lambda1=" << l1 / 1e3 << " kHz lambda2=" << l2 / 1e3 << " kHz";
  o.require(rel(l1, 52e3) <= 0.05, "52 kHz +/- 5%");
  o.require(rel(l2, 77e3) <= 0.05, "77 kHz +/- 5%");
  o.require(rel(l1, lambda_oracle(w1, 1e5) / (2.0 * kPi)) < 1e-9, "closed form");
}

void fock_state(Outcome& o) {
  const double lambda = 2.0 * kPi * 52e3;
  const std::size_t dim = 64;
  const auto t0 = std::chrono::steady_clock::now();
  const auto f = prepare_fock(2, lambda, dim);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // Dense oracle: exp(-i H t) by eigendecomposition of each pulse Hamiltonian.
  Eigen::VectorXcd psi = SpinPhononState::basis_state(SpinBasis::Dressed, dim, 0, 0).amplitudes();
  for (const auto& step : f.sequence) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian(step.tag, step.params, SpinBasis::Dressed, dim));
    const Eigen::VectorXcd ph = (es.eigenvalues().cast<cd>() * cd(0.0, -step.duration)).array().exp().matrix();
    psi = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint() * psi;
  }
  const double oracle_target = std::norm(psi[2]);  // |+, 2> sits at spin 0, n = 2
  const double agreement = std::norm(psi.dot(f.state.amplitudes()));
  o.detail << "fidelity=" << f.fidelity << " oracle=" << oracle_target << " overlap=" << agreement
           << " time=" << secs << " s";
  o.require(f.fidelity > 0.9999, "fidelity > 0.9999");
  o.require(oracle_target > 0.9999, "oracle fidelity > 0.9999");
  o.require(agreement > 1.0 - 1e-10, "state matches oracle");
  o.require(secs < 10.0, "under 10 s");
}

void cat_state(Outcome& o) {
  const double w = 2.0 * kPi * 20e3;
  const auto cat = cat_protocol(diamond(), w, 3e4, 0);
  const double m = diamond().mass();
  const double a2 = std::sqrt(kHbar / (2.0 * m * w));
  const double d = 4.0 * 2.0 * constants::kBohrMagneton * 3e4 / (m * w * w);
  const double period = 2.0 * kPi * kHbar * 10e-3 / (m * d);
  o.detail << "D/a2=" << cat.d_m / cat.a2 << " period=" << cat.fringe_period(10e-3) * 1e9
           << " nm numeric_rel=" << rel(cat.d_m_numeric, cat.d_m);
  o.require(rel(cat.d_m / cat.a2, 31.0) <= 0.05, "D = 31 a2 +/- 5%");
  o.require(rel(cat.d_m, d) < 1e-9, "D closed form");
  o.require(rel(cat.fringe_period(10e-3), 47e-9) <= 0.05, "47 nm +/- 5%");
  o.require(rel(cat.fringe_period(10e-3), period) < 1e-6, "period closed form");
  o.require(rel(cat.d_m_numeric, cat.d_m) <= 1e-4, "numeric separation to 1e-4");
}

SensingScenario figure_scenario(double radius, double freq_hz) {
  SensingScenario s{Particle(radius, 2200.0, 2.1), GasEnvironment(1e-10 * 101325.0 / 760.0, 300.0)};
  s.omega0 = 2.0 * kPi * freq_hz;
  return s;
}

void exponents(Outcome& o) {
  const auto gas_lim = figure_scenario(30e-9, 1e3);
  const auto rec_lim = figure_scenario(5e-6, 1e4);
  const SweepAxis axes[] = {SweepAxis::Radius, SweepAxis::Temperature, SweepAxis::Pressure,
                            SweepAxis::Frequency};
  const double want_gas[] = {1.0, 0.25, 0.5, 0.0};
  const double want_rec[] = {3.0, 0.0, 0.0, 1.0};
  o.detail << "chi=" << f_min_recoil(gas_lim).chi << "/" << f_min_recoil(rec_lim).chi;
  for (int i = 0; i < 4; ++i) {
    const double eg = scaling_exponent(gas_lim, axes[i]);
    const double er = scaling_exponent(rec_lim, axes[i]);
    o.detail << " " << to_string(axes[i]) << "=(" << eg << "," << er << ")";
    o.require(std::fabs(eg - want_gas[i]) <= 0.02, to_string(axes[i]) + " gas-limited");
    o.require(std::fabs(er - want_rec[i]) <= 0.02, to_string(axes[i]) + " recoil-limited");
  }
  o.require(f_min_recoil(gas_lim).chi < 1e-2 && f_min_recoil(rec_lim).chi > 1e2, "regime depth");
}

void sensing_anchors(Outcome& o) {
  // 70 nm diameter silica at 1e-5 mbar.
  const Particle p(35e-9, 2200.0, 2.1);
  const double t = 297.0;
  const GasEnvironment gas(1e-3, t);
  const double f = f_min_damping(p.mass(), t, 1.0, gas_damping(p, gas));
  const double vbar = std::sqrt(8.0 * kBoltzmann * t / (kPi * constants::kAirMoleculeMass));
  const double oracle = std::sqrt(4.0 * kBoltzmann * t * p.mass() * 16.0 * 1e-3 / (kPi * vbar * 35e-9 * 2200.0));
  const double y = yukawa_scale(19300.0, 1e5, 1e-6);
  const double y_oracle = constants::kGravitation * 19300.0 * 19300.0 * 1e5 * std::pow(1e-6, 4);
  o.detail << "F_min=" << f << " N/rtHz yukawa=" << y << " N";
  o.require(f > 1e-20 / 5.0 && f < 1e-20 * 5.0, "F_min within factor 5 of 1e-20");
  o.require(rel(f, oracle) < 1e-6, "F_min closed form");
  o.require(y > 1e-21 / 3.0 && y < 1e-21 * 3.0, "Yukawa within factor 3 of 1e-21");
  o.require(rel(y, y_oracle) < 1e-12, "Yukawa closed form");
}

void collisions(Outcome& o) {
  const Particle p(50e-9, 2200.0, 2.1);
  const GasEnvironment gas(1e-5, 300.0);
  const double w = 2.0 * kPi * 1e5;
  const double mm = gas.molecule_mass();
  const double n_oracle = 2.0 * kPi * 50e-9 * 50e-9 * 1e-5 / std::sqrt(kPi * mm * kBoltzmann * 300.0 / 2.0);
  const double n0_oracle = 2.0 * mm * kBoltzmann * 300.0 / (kHbar * w * p.mass());
  const CollisionScenario s{p, gas, w, {1e6, 1.0, 1e7}, 300.0, Elasticity::Inelastic};
  const double duration = 1e5 / n_oracle;
  const auto st = simulate_stream(s, duration, 2718);
  const double count = static_cast<double>(st.events.size());
  double photons = 0.0;
  for (const auto& e : st.events) photons += static_cast<double>(e.photons);
  const double mean = photons / count;
  const double se = std::sqrt((n0_oracle + 2.0 * n0_oracle * n0_oracle) / count);
  const double t_est = surface_temperature_estimate(st.events, p, gas, w);
  o.detail << "events=" << count << " expected=" << n_oracle * duration << " mean_photons=" << mean
           << " n0=" << n0_oracle << " T_sur=" << t_est << " K";
  o.require(rel(st.rate, n_oracle) < 1e-9, "rate formula");
  o.require(std::fabs(count - n_oracle * duration) <= 3.0 * std::sqrt(n_oracle * duration), "count within 3 sigma");
  o.require(rel(st.n0, n0_oracle) < 1e-9, "n0 formula");
  o.require(std::fabs(mean - n0_oracle) <= 3.0 * se, "mean photons within 3 sigma");
  o.require(rel(t_est, 300.0) <= 0.05, "T_sur within 5%");
}

void properties(Outcome& o) {
  // Norm conservation under long evolution.
  {
    const std::size_t dim = 40;
    Eigen::VectorXcd spin(2);
    spin << 1.0, cd(0.0, 1.0);
    Eigen::VectorXcd ph = Eigen::VectorXcd::Zero(dim);
    ph[0] = 1.0;
    ph[1] = 0.5;
    auto s = SpinPhononState::product(SpinBasis::Dressed, spin, ph);
    HamiltonianParams hp;
    hp.lambda = 0.05;
    hp.omega_m = 1.0;
    hp.rabi = 0.7;
    for (int i = 0; i < 1000; ++i) s = evolve(s, HamiltonianTag::Effective, hp, 0.01);
    o.detail << "norm_drift=" << s.norm_drift();
    o.require(std::fabs(s.norm() - 1.0) < 1e-12, "norm");
  }
  // sigma_z / 2 + a'a is conserved by the JC Hamiltonian.
  {
    const std::size_t dim = 30;
    Eigen::VectorXcd spin(2);
    spin << 0.6, cd(0.0, 0.8);
    Eigen::VectorXcd ph = Eigen::VectorXcd::Zero(dim);
    for (int n = 0; n < 6; ++n) ph[n] = cd(1.0 / (n + 1), 0.3 * n);
    const auto s = SpinPhononState::product(SpinBasis::Dressed, spin, ph);
    auto excitation = [&](const SpinPhononState& st) {
      double e = 0.0;
      for (std::size_t n = 0; n < dim; ++n)
        e += std::norm(st.amplitude(0, n)) * (n + 0.5) + std::norm(st.amplitude(1, n)) * (n - 0.5);
      return e;
    };
    HamiltonianParams hp;
    hp.lambda = 2.0 * kPi * 52e3;
    double worst = 0.0;
    for (double t : {1e-6, 3.7e-5, 1e-3}) {
      worst = std::max(worst, std::fabs(excitation(evolve(s, HamiltonianTag::JC, hp, t)) - excitation(s)));
    }
    o.detail << " jc_drift=" << worst;
    o.require(worst < 1e-8, "JC conservation");
  }
  // Parseval: the Welch estimate integrates to the sample variance.
  {
    CounterRng rng(11, 0);
    std::vector<double> x(1 << 18);
    double var = 0.0;
    for (auto& v : x) {
      v = 2e-9 * rng.gaussian();
      var += v * v;
    }
    var /= static_cast<double>(x.size());
    const double iv = estimate_psd(x, 1e-5, {1024, 0.5}).integrated_variance();
    o.detail << " parseval_rel=" << rel(iv, var);
    o.require(rel(iv, var) < 0.05, "Parseval");
  }
  // Determinism per seed.
  {
    OscillatorParams p;
    p.mass = 1e-15;
    p.temperature = 300.0;
    p.gamma0 = 1e3;
    p.omega = {1e5, 1.2e5, 0.8e5};
    const double dt = max_step(p);
    const auto a = simulate(p, 1e-2, dt, 9, {});
    const auto b = simulate(p, 1e-2, dt, 9, {});
    const auto c = simulate(p, 1e-2, dt, 10, {});
    bool same = a.samples.size() == b.samples.size();
    for (std::size_t i = 0; same && i < a.samples.size(); ++i)
      same = a.samples[i].position == b.samples[i].position && a.samples[i].velocity == b.samples[i].velocity;
    const bool differs = a.samples.back().position != c.samples.back().position;
    const CollisionScenario cs{Particle(50e-9, 2200.0, 2.1), GasEnvironment(1e-5, 300.0), 2.0 * kPi * 1e5,
                               {1e6, 1.0, 1e7}, 300.0, Elasticity::Elastic};
    const auto s1 = simulate_stream(cs, 0.5, 3);
    const auto s2 = simulate_stream(cs, 0.5, 3);
    bool stream_same = s1.events.size() == s2.events.size();
    for (std::size_t i = 0; stream_same && i < s1.events.size(); ++i)
      stream_same = s1.events[i].time == s2.events[i].time && s1.events[i].photons == s2.events[i].photons;
    o.require(same && differs && stream_same, "determinism");
  }
  // Results do not move when the truncation is doubled.
  {
    const double w = 2.0 * kPi * 20e3;
    const auto base = cat_protocol(diamond(), w, 3e4, 0);
    const auto big = cat_protocol(diamond(), w, 3e4, 0, 2 * base.dim);
    const auto f1 = prepare_fock(2, 2.0 * kPi * 52e3, 64);
    const auto f2 = prepare_fock(2, 2.0 * kPi * 52e3, 128);
    const double dc = std::fabs(big.d_m_numeric - base.d_m_numeric) / base.d_m;
    const double df = std::fabs(f1.fidelity - f2.fidelity);
    o.detail << " truncation=" << dc << "," << df;
    o.require(dc < 1e-8 && df < 1e-8, "truncation robustness");
  }
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "thermal velocity distribution", 60.0, thermal_velocity},
      {2, "feedback-cooled temperature", 120.0, feedback_temperature},
      {3, "gas damping rate", 60.0, gas_damping_rate},
      {4, "sideband cooling limit and dynamics", 60.0, sideband_limit},
      {5, "output squeezing", 60.0, squeezing},
      {6, "spin-phonon coupling anchors", 60.0, coupling_anchors},
      {7, "two-phonon Fock preparation", 10.0, fock_state},
      {8, "cat separation and fringes", 60.0, cat_state},
      {9, "force-sensitivity scaling exponents", 60.0, exponents},
      {10, "force-sensitivity anchors", 60.0, sensing_anchors},
      {11, "gas-collision stream", 60.0, collisions},
      {12, "property suites", 120.0, properties},
  };
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.budget_s, "time budget");
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu passed in %.1f s\n", static_cast<int>(criteria.size()) - failures, criteria.size(), total);
  return failures == 0 ? 0 : 1;
}
