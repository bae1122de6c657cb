#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "doctest.h"
#include "levitsim/errors.hpp"
#include "levitsim/spinmech.hpp"

using namespace levitsim;
using doctest::Approx;
using constants::kHbar;
using constants::kPi;
using cd = std::complex<double>;

namespace {

const Particle kDiamond(15e-9, 3500.0, 5.7);

// exp(-i H t) psi from the eigendecomposition of the full Hamiltonian.
Eigen::VectorXcd oracle_evolve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<cd>() * cd(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * psi;
}

HamiltonianParams jc(double lambda) {
  HamiltonianParams p;
  p.lambda = lambda;
  return p;
}

}  // namespace

TEST_CASE("spin-phonon coupling anchors") {
  const double lam1 = spin_coupling(kDiamond, units::hz_to_rad(0.5e6), 1e5);
  CHECK(units::rad_to_hz(lam1) == Approx(52e3).epsilon(0.05));
  const double lam2 = spin_coupling(kDiamond, units::hz_to_rad(20e3), 3e4);
  CHECK(units::rad_to_hz(lam2) == Approx(77e3).epsilon(0.05));
  CHECK(spin_coupling(kDiamond, 1e6, 0.0) == 0.0);
}

TEST_CASE("single JC and anti-JC pulses") {
  const double lambda = 1e5;
  const std::size_t dim = 16;
  const double t1 = kPi / (2.0 * lambda);
  const auto start = SpinPhononState::basis_state(SpinBasis::Dressed, dim, 0, 0);
  const auto s1 = evolve(start, HamiltonianTag::JC, jc(lambda), t1);
  const auto minus_one = SpinPhononState::basis_state(SpinBasis::Dressed, dim, 1, 1);
  CHECK(fidelity(s1, minus_one) > 0.9999);
  const auto s2 = evolve(minus_one, HamiltonianTag::AJC, jc(lambda), t1 / std::sqrt(2.0));
  CHECK(fidelity(s2, SpinPhononState::basis_state(SpinBasis::Dressed, dim, 0, 2)) > 0.9999);
}

TEST_CASE("Fock preparation") {
  const double lambda = units::hz_to_rad(52e3);
  SUBCASE("n = 0 is the empty sequence") {
    const auto f = prepare_fock(0, lambda, 16);
    CHECK(f.sequence.empty());
    CHECK(f.fidelity == Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("n = 2 against a dense matrix-exponential oracle") {
    const std::size_t dim = 64;
    const auto f = prepare_fock(2, lambda, dim);
    REQUIRE(f.sequence.size() == 2);
    CHECK(f.fidelity > 0.9999);
    Eigen::VectorXcd psi = SpinPhononState::basis_state(SpinBasis::Dressed, dim, 0, 0).amplitudes();
    for (const auto& step : f.sequence) {
      psi = oracle_evolve(hamiltonian(step.tag, step.params, SpinBasis::Dressed, dim), psi,
                          step.duration);
    }
    CHECK(std::norm(psi.dot(f.state.amplitudes())) > 1.0 - 1e-10);
  }
  SUBCASE("n = 5 against the oracle") {
    const std::size_t dim = 24;
    const auto f = prepare_fock(5, lambda, dim);
    CHECK(f.sequence.size() == 5);
    CHECK(f.fidelity > 0.999);
    Eigen::VectorXcd psi = SpinPhononState::basis_state(SpinBasis::Dressed, dim, 0, 0).amplitudes();
    for (const auto& step : f.sequence) {
      psi = oracle_evolve(hamiltonian(step.tag, step.params, SpinBasis::Dressed, dim), psi,
                          step.duration);
    }
    CHECK(std::norm(psi.dot(f.state.amplitudes())) > 1.0 - 1e-6);
  }
  CHECK_THROWS_AS(prepare_fock(10, lambda, 12), TruncationError);
}

TEST_CASE("truncation guard") {
  const auto top = SpinPhononState::basis_state(SpinBasis::Dressed, 8, 0, 7);
  try {
    evolve(top, HamiltonianTag::JC, jc(1.0), 0.1);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(std::string(e.what()).find("increase the truncation") != std::string::npos);
  }
  // A coherent displacement that runs into the cutoff during evolution.
  Eigen::VectorXcd spin(3);
  spin << 0.0, 1.0, 0.0;
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(12);
  vac[0] = 1.0;
  const auto s = SpinPhononState::product(SpinBasis::Triplet, spin, vac);
  HamiltonianParams hp;
  hp.lambda = 3.0;
  hp.omega_m = 1.0;
  CHECK_THROWS_AS(evolve(s, HamiltonianTag::CAT, hp, kPi), TruncationError);
}

TEST_CASE("norm conservation over many steps") {
  const std::size_t dim = 40;
  Eigen::VectorXcd spin(2);
  spin << 1.0, cd(0.0, 1.0);
  Eigen::VectorXcd ph = Eigen::VectorXcd::Zero(dim);
  ph[0] = 1.0;
  ph[1] = 0.5;
  ph[2] = cd(0.0, 0.2);
  auto s = SpinPhononState::product(SpinBasis::Dressed, spin, ph);
  HamiltonianParams hp;
  hp.lambda = 0.05;
  hp.omega_m = 1.0;
  hp.rabi = 0.7;
  for (int i = 0; i < 1000; ++i) s = evolve(s, HamiltonianTag::Effective, hp, 0.01);
  CHECK(s.norm_drift() < 1e-9);
  CHECK(s.norm() == Approx(1.0).epsilon(1e-12));
  CHECK(s.valid());
}

TEST_CASE("JC conserves sigma_z / 2 + a^dagger a") {
  const std::size_t dim = 30;
  Eigen::VectorXcd spin(2);
  spin << 0.6, cd(0.0, 0.8);
  Eigen::VectorXcd ph = Eigen::VectorXcd::Zero(dim);
  for (int n = 0; n < 6; ++n) ph[n] = cd(1.0 / (n + 1), 0.3 * n);
  auto s = SpinPhononState::product(SpinBasis::Dressed, spin, ph);
  auto excitation = [&](const SpinPhononState& st) {
    double e = 0.0;
    for (std::size_t n = 0; n < dim; ++n) {
      e += std::norm(st.amplitude(0, n)) * (0.5 + n);
      e += std::norm(st.amplitude(1, n)) * (-0.5 + n);
    }
    return e;
  };
  const double e0 = excitation(s);
  for (double t : {1e-6, 3.7e-5, 2e-4, 1e-3}) {
    const auto out = evolve(s, HamiltonianTag::JC, jc(units::hz_to_rad(52e3)), t);
    CHECK(std::fabs(excitation(out) - e0) < 1e-8);
  }
}

TEST_CASE("QND evolution") {
  const double chi = 2.0 * kPi * 7e3;
  SUBCASE("phonon populations are untouched") {
    const std::size_t dim = 20;
    Eigen::VectorXcd spin(2);
    spin << 1.0, 1.0;
    Eigen::VectorXcd ph = Eigen::VectorXcd::Zero(dim);
    for (int n = 0; n < 8; ++n) ph[n] = std::polar(1.0 / (1.0 + n), 0.4 * n);
    const auto s = SpinPhononState::product(SpinBasis::Dressed, spin, ph);
    const auto r = qnd_readout(s, chi, 3.3e-5);
    const auto after = r.state.phonon_populations();
    for (std::size_t n = 0; n < dim; ++n) CHECK(std::fabs(after[n] - r.populations[n]) < 1e-10);
    CHECK(r.fringe_from_state == Approx(r.fringe).epsilon(1e-9));
  }
  SUBCASE("vacuum keeps its phase, one phonon advances by pi") {
    Eigen::VectorXcd spin(2);
    spin << 1.0, std::polar(1.0, 0.3);
    Eigen::VectorXcd ph = Eigen::VectorXcd::Zero(8);
    ph[0] = 1.0;
    const auto vac = qnd_readout(SpinPhononState::product(SpinBasis::Dressed, spin, ph), chi, 1e-4);
    CHECK(vac.phases[0] == Approx(0.3).epsilon(1e-12));
    CHECK(vac.fringe == Approx(std::cos(0.3)).epsilon(1e-12));
    ph[0] = 0.0;
    ph[1] = 1.0;
    const double t = kPi / (2.0 * chi);
    const auto one = qnd_readout(SpinPhononState::product(SpinBasis::Dressed, spin, ph), chi, t);
    CHECK(one.phases[1] - 0.3 == Approx(kPi).epsilon(1e-12));
    CHECK(one.fringe_from_state == Approx(std::cos(0.3 + kPi)).epsilon(1e-9));
  }
}

TEST_CASE("dispersive shift rate") {
  const double wm = units::hz_to_rad(0.5e6);
  const double lambda = spin_coupling(kDiamond, wm, 1e5);
  const double rabi = 0.5 * wm + 5.0 * lambda;
  const auto d = qnd_shift(rabi, lambda, wm);
  CHECK(d.valid);
  const double rate = 2.0 * std::fabs(d.chi);
  CHECK(rate > units::hz_to_rad(25e3) / 3.0);
  CHECK(rate < units::hz_to_rad(25e3) * 3.0);
  CHECK_FALSE(qnd_shift(0.5 * wm + lambda, lambda, wm).valid);

  SUBCASE("matches the level shifts of the driven Hamiltonian") {
    // (E_{+,n} - E_{-,n}) - (E_{+,0} - E_{-,0}) = 2 chi n to leading order.
    const std::size_t dim = 24;
    HamiltonianParams hp;
    hp.lambda = lambda;
    hp.omega_m = wm;
    hp.rabi = rabi;
    const Eigen::MatrixXcd h = hamiltonian(HamiltonianTag::Effective, hp, SpinBasis::Dressed, dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    auto level = [&](std::size_t spin, std::size_t n) {
      Eigen::Index best = 0;
      double w = -1.0;
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double o = std::norm(es.eigenvectors()(static_cast<Eigen::Index>(spin * dim + n), k));
        if (o > w) {
          w = o;
          best = k;
        }
      }
      return es.eigenvalues()[best];
    };
    const double split0 = level(0, 0) - level(1, 0);
    for (std::size_t n : {1u, 2u}) {
      const double shift = level(0, n) - level(1, n) - split0;
      CHECK(shift == Approx(2.0 * d.chi * n).epsilon(0.15));
    }
  }
}

TEST_CASE("spin-conditioned displacement is a coherent state") {
  const double omega = 1.0, lambda = 1.3;
  const std::size_t dim = 60;
  Eigen::VectorXcd spin(3);
  spin << 0.0, 1.0, 0.0;
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(dim);
  vac[0] = 1.0;
  const auto s0 = SpinPhononState::product(SpinBasis::Triplet, spin, vac);
  HamiltonianParams hp;
  hp.lambda = lambda;
  hp.omega_m = omega;
  for (double t : {0.4, 1.7, kPi}) {
    const auto s = evolve(s0, HamiltonianTag::CAT, hp, t);
    const cd alpha = -(lambda / omega) * (1.0 - std::exp(cd(0.0, -omega * t)));
    Eigen::VectorXcd coh = Eigen::VectorXcd::Zero(3 * dim);
    cd c = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n < dim; ++n) {
      coh[dim + n] = c;
      c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    CHECK(1.0 - std::norm(coh.dot(s.amplitudes())) < 1e-6);
  }
}

TEST_CASE("cat protocol at 20 kHz and 3e4 T/m") {
  const double w = units::hz_to_rad(20e3);
  const auto cat = cat_protocol(kDiamond, w, 3e4, 0);
  CHECK(cat.d_m / cat.a2 == Approx(31.0).epsilon(0.05));
  CHECK(cat.d_m == Approx(8.0 * cat.lambda * cat.a2 / w).epsilon(1e-12));
  CHECK(cat.d_m == Approx(4.0 * constants::kSpinG * constants::kBohrMagneton * 3e4 /
                          (kDiamond.mass() * w * w))
                       .epsilon(1e-9));
  CHECK(cat.d_m_numeric == Approx(cat.d_m).epsilon(1e-4));
  CHECK(cat.fringe_period(10e-3) == Approx(47e-9).epsilon(0.05));
  CHECK(exact_fringe_period(cat.mass, w, cat.d_m, 10e-3) ==
        Approx(cat.fringe_period(10e-3)).epsilon(1e-5));
  CHECK(cat.split.valid());

  SUBCASE("disentangled cat has the spin in |0> and even parity") {
    const auto rho = cat.cat.spin_density();
    CHECK(std::abs(rho(0, 0)) == Approx(1.0).epsilon(1e-12));
    double odd = 0.0;
    const auto p = cat.cat.phonon_populations();
    for (std::size_t n = 1; n < p.size(); n += 2) odd += p[n];
    CHECK(odd < 1e-10);
  }
  SUBCASE("time-of-flight fringes have the predicted spacing") {
    const double t = 10e-3;
    const double period = exact_fringe_period(cat.mass, w, cat.d_m, t);
    std::vector<double> z;
    for (int i = -4000; i <= 4000; ++i) z.push_back(i * period / 400.0);
    const auto I = fringe_pattern(cat.mass, w, cat.d_m, t, +1, z);
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < I.size(); ++i) {
      if (I[i] > I[i - 1] && I[i] >= I[i + 1]) peaks.push_back(z[i]);
    }
    REQUIRE(peaks.size() >= 5);
    const double spacing = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
    CHECK(spacing == Approx(period).epsilon(1e-3));
    double area = 0.0;
    for (double v : I) area += v * (z[1] - z[0]);
    CHECK(area == Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("cat protocol without gradient") {
  const auto cat = cat_protocol(kDiamond, units::hz_to_rad(20e3), 0.0, 0);
  CHECK(cat.d_m == 0.0);
  CHECK(cat.d_m_numeric == Approx(0.0).scale(1.0));
  const auto rho = cat.split.spin_density();
  CHECK(std::norm((rho * rho).trace()) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("truncation robustness") {
  const double w = units::hz_to_rad(20e3);
  const auto base = cat_protocol(kDiamond, w, 3e4, 0);
  const auto big = cat_protocol(kDiamond, w, 3e4, 0, 2 * base.dim);
  CHECK(std::fabs(big.d_m_numeric - base.d_m_numeric) / base.d_m < 1e-8);
  CHECK(std::fabs(big.split.mean_phonons() - base.split.mean_phonons()) < 1e-8);

  const double lambda = units::hz_to_rad(52e3);
  const auto f1 = prepare_fock(2, lambda, 64);
  const auto f2 = prepare_fock(2, lambda, 128);
  CHECK(std::fabs(f1.fidelity - f2.fidelity) < 1e-8);
  CHECK(std::fabs(f1.state.mean_phonons() - f2.state.mean_phonons()) < 1e-8);

  const auto n1 = cat_protocol(kDiamond, w, 3e4, 2);
  const auto n2 = cat_protocol(kDiamond, w, 3e4, 2, 2 * n1.dim);
  CHECK(std::fabs(n2.d_m_numeric - n1.d_m_numeric) / n1.d_m < 1e-8);
}

TEST_CASE("displaced Fock initial state keeps the separation") {
  const double w = units::hz_to_rad(20e3);
  const auto cat = cat_protocol(kDiamond, w, 3e4, 3);
  CHECK(cat.d_m_numeric == Approx(cat.d_m).epsilon(1e-4));
  CHECK(cat.dim > cat_dimension(cat.lambda, w, 0));
}

TEST_CASE("trap-frequency quench") {
  const auto same = quench_overlap(1.0, 1.0, 12);
  CHECK((same - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-10);
  const double r = 0.25;
  const auto o = quench_overlap(1.0, r, 40);
  CHECK(std::fabs(o(0, 0)) == Approx(std::sqrt(2.0 * std::sqrt(r) / (1.0 + r))).epsilon(1e-10));
  CHECK(std::fabs(o(1, 0)) < 1e-12);
  double col = 0.0;
  for (int k = 0; k < 40; ++k) col += o(k, 0) * o(k, 0);
  CHECK(col == Approx(1.0).epsilon(1e-6));

  Eigen::VectorXcd spin(3);
  spin << 1.0, 0.0, 0.0;
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(40);
  vac[0] = 1.0;
  const auto s = quench(SpinPhononState::product(SpinBasis::Triplet, spin, vac), 1.0, r);
  CHECK(s.norm() == Approx(1.0));
  CHECK(s.leak() < 1e-6);
}

TEST_CASE("basis mismatch is rejected") {
  const auto s = SpinPhononState::basis_state(SpinBasis::Triplet, 8, 0, 0);
  CHECK_THROWS_AS(evolve(s, HamiltonianTag::JC, jc(1.0), 1.0), DomainError);
  CHECK(hamiltonian_from_string("AJC") == HamiltonianTag::AJC);
  CHECK_THROWS_AS(hamiltonian_from_string("XYZ"), ConfigError);
}
