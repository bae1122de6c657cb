#include "levitsim/spinmech.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "levitsim/errors.hpp"

namespace levitsim {

using constants::kHbar;
using constants::kPi;
using cd = std::complex<double>;

namespace {

constexpr std::size_t kPlus = 0;   // dressed |+>
constexpr std::size_t kMinus = 1;  // dressed |->
constexpr std::size_t kZero = 0;   // triplet |0>
constexpr std::size_t kUp = 1;     // triplet |+1>
constexpr std::size_t kDown = 2;   // triplet |-1>

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Connected components of the sparsity graph of h.
std::vector<std::vector<std::size_t>> blocks(const Eigen::MatrixXcd& h) {
  const auto n = static_cast<std::size_t>(h.rows());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (h(ix(i), ix(j)) != cd(0.0) || h(ix(j), ix(i)) != cd(0.0)) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == n) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(i);
  }
  return out;
}

void require_basis(SpinBasis have, SpinBasis want, HamiltonianTag tag) {
  if (have != want) {
    throw DomainError("hamiltonian " + to_string(tag) + " requires the " + to_string(want) +
                      " spin basis");
  }
}

// Normalised Hermite functions h_0..h_{n-1} at x.
void hermite_functions(double x, std::size_t n, std::vector<double>& out) {
  out.assign(n, 0.0);
  if (n == 0) return;
  out[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n > 1) out[1] = std::sqrt(2.0) * x * out[0];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double kk = static_cast<double>(k);
    out[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * x * out[k] - std::sqrt(kk / (kk + 1.0)) * out[k - 1];
  }
}

}  // namespace

void validate(const SpinConfig& s) {
  if (!(s.gradient >= 0.0)) throw DomainError("SpinConfig: gradient must be >= 0");
  if (!std::isfinite(s.rabi) || !std::isfinite(s.detuning)) {
    throw DomainError("SpinConfig: drive parameters must be finite");
  }
}

std::size_t spin_levels(SpinBasis b) noexcept { return b == SpinBasis::Dressed ? 2 : 3; }

std::string to_string(SpinBasis b) { return b == SpinBasis::Dressed ? "+-" : "0,+1,-1"; }

std::string to_string(HamiltonianTag t) {
  switch (t) {
    case HamiltonianTag::JC: return "JC";
    case HamiltonianTag::AJC: return "AJC";
    case HamiltonianTag::QND: return "QND";
    case HamiltonianTag::FREE: return "FREE";
    case HamiltonianTag::CAT: return "CAT";
    case HamiltonianTag::Effective: return "EFFECTIVE";
  }
  return "?";
}

HamiltonianTag hamiltonian_from_string(const std::string& s) {
  for (auto t : {HamiltonianTag::JC, HamiltonianTag::AJC, HamiltonianTag::QND,
                 HamiltonianTag::FREE, HamiltonianTag::CAT, HamiltonianTag::Effective}) {
    if (to_string(t) == s) return t;
  }
  throw ConfigError("unknown hamiltonian tag '" + s + "'");
}

SpinPhononState::SpinPhononState(SpinBasis basis, std::size_t dim)
    : basis_(basis), dim_(dim), psi_(Eigen::VectorXcd::Zero(ix(spin_levels(basis) * dim))) {
  if (dim < 2) throw DomainError("SpinPhononState: Fock dimension must be >= 2");
}

SpinPhononState SpinPhononState::basis_state(SpinBasis basis, std::size_t dim, std::size_t spin,
                                             std::size_t n) {
  SpinPhononState s(basis, dim);
  if (spin >= s.levels() || n >= dim) throw DomainError("basis_state: index out of range");
  s.psi_[ix(s.index(spin, n))] = 1.0;
  return s;
}

SpinPhononState SpinPhononState::product(SpinBasis basis, const Eigen::VectorXcd& spin,
                                         const Eigen::VectorXcd& phonon) {
  SpinPhononState s(basis, static_cast<std::size_t>(phonon.size()));
  if (static_cast<std::size_t>(spin.size()) != s.levels()) {
    throw DomainError("product: spin vector has the wrong length for this basis");
  }
  for (std::size_t a = 0; a < s.levels(); ++a) {
    s.psi_.segment(ix(a * s.dim_), ix(s.dim_)) = spin[ix(a)] * phonon;
  }
  s.renormalize();
  s.norm_drift_ = 0.0;
  return s;
}

std::vector<double> SpinPhononState::phonon_populations() const {
  std::vector<double> p(dim_, 0.0);
  for (std::size_t a = 0; a < levels(); ++a) {
    for (std::size_t n = 0; n < dim_; ++n) p[n] += std::norm(psi_[ix(index(a, n))]);
  }
  return p;
}

double SpinPhononState::tail_occupancy(std::size_t k) const {
  const auto p = phonon_populations();
  double s = 0.0;
  for (std::size_t n = dim_ - std::min(k, dim_); n < dim_; ++n) s += p[n];
  return s;
}

double SpinPhononState::mean_phonons() const {
  const auto p = phonon_populations();
  double s = 0.0;
  for (std::size_t n = 0; n < dim_; ++n) s += static_cast<double>(n) * p[n];
  return s / psi_.squaredNorm();
}

double SpinPhononState::branch_quadrature(std::size_t spin) const {
  double weight = 0.0;
  cd acc = 0.0;
  for (std::size_t n = 0; n < dim_; ++n) {
    const cd c = psi_[ix(index(spin, n))];
    weight += std::norm(c);
    if (n + 1 < dim_) {
      acc += std::conj(c) * psi_[ix(index(spin, n + 1))] * std::sqrt(static_cast<double>(n + 1));
    }
  }
  if (weight == 0.0) throw DomainError("branch_quadrature: spin branch is empty");
  return 2.0 * acc.real() / weight;
}

Eigen::MatrixXcd SpinPhononState::spin_density() const {
  const auto l = levels();
  Eigen::MatrixXcd rho(ix(l), ix(l));
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t b = 0; b < l; ++b) {
      rho(ix(a), ix(b)) = psi_.segment(ix(b * dim_), ix(dim_))
                              .dot(psi_.segment(ix(a * dim_), ix(dim_)));
    }
  }
  return rho / psi_.squaredNorm();
}

void SpinPhononState::renormalize() {
  const double n = psi_.norm();
  if (!(n > 0.0)) throw NumericalError("renormalize: state has zero norm");
  norm_drift_ += std::fabs(n - 1.0);
  psi_ /= n;
}

double fidelity(const SpinPhononState& a, const SpinPhononState& b) {
  if (a.amplitudes().size() != b.amplitudes().size() || a.basis() != b.basis()) {
    throw DomainError("fidelity: states live in different spaces");
  }
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

Eigen::MatrixXcd hamiltonian(HamiltonianTag tag, const HamiltonianParams& p, SpinBasis basis,
                             std::size_t dim) {
  const std::size_t levels = spin_levels(basis);
  const std::size_t size = levels * dim;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(ix(size), ix(size));
  auto at = [&](std::size_t s, std::size_t n) { return ix(s * dim + n); };
  auto sq = [](std::size_t n) { return std::sqrt(static_cast<double>(n)); };
  switch (tag) {
    case HamiltonianTag::JC:
      require_basis(basis, SpinBasis::Dressed, tag);
      for (std::size_t n = 1; n < dim; ++n) {
        h(at(kPlus, n - 1), at(kMinus, n)) = p.lambda * sq(n);
        h(at(kMinus, n), at(kPlus, n - 1)) = p.lambda * sq(n);
      }
      break;
    case HamiltonianTag::AJC:
      require_basis(basis, SpinBasis::Dressed, tag);
      for (std::size_t n = 0; n + 1 < dim; ++n) {
        h(at(kPlus, n + 1), at(kMinus, n)) = p.lambda * sq(n + 1);
        h(at(kMinus, n), at(kPlus, n + 1)) = p.lambda * sq(n + 1);
      }
      break;
    case HamiltonianTag::QND:
      require_basis(basis, SpinBasis::Dressed, tag);
      for (std::size_t n = 0; n < dim; ++n) {
        h(at(kPlus, n), at(kPlus, n)) = p.chi * static_cast<double>(n);
        h(at(kMinus, n), at(kMinus, n)) = -p.chi * static_cast<double>(n);
      }
      break;
    case HamiltonianTag::FREE:
      for (std::size_t s = 0; s < levels; ++s) {
        double spin_energy = 0.0;
        if (basis == SpinBasis::Dressed) spin_energy = s == kPlus ? p.rabi : -p.rabi;
        for (std::size_t n = 0; n < dim; ++n) {
          h(at(s, n), at(s, n)) = p.omega_m * static_cast<double>(n) + spin_energy;
        }
      }
      break;
    case HamiltonianTag::CAT:
      require_basis(basis, SpinBasis::Triplet, tag);
      for (std::size_t s = 0; s < levels; ++s) {
        const double sz = s == kUp ? 1.0 : (s == kDown ? -1.0 : 0.0);
        for (std::size_t n = 0; n < dim; ++n) {
          h(at(s, n), at(s, n)) = p.omega_m * static_cast<double>(n);
          if (n + 1 < dim && sz != 0.0) {
            h(at(s, n), at(s, n + 1)) = sz * p.lambda * sq(n + 1);
            h(at(s, n + 1), at(s, n)) = sz * p.lambda * sq(n + 1);
          }
        }
      }
      break;
    case HamiltonianTag::Effective:
      require_basis(basis, SpinBasis::Dressed, tag);
      for (std::size_t n = 0; n < dim; ++n) {
        h(at(kPlus, n), at(kPlus, n)) = p.omega_m * static_cast<double>(n) + p.rabi;
        h(at(kMinus, n), at(kMinus, n)) = p.omega_m * static_cast<double>(n) - p.rabi;
        if (n + 1 < dim) {
          const double c = p.lambda * sq(n + 1);
          h(at(kPlus, n), at(kMinus, n + 1)) = c;
          h(at(kMinus, n + 1), at(kPlus, n)) = c;
          h(at(kMinus, n), at(kPlus, n + 1)) = c;
          h(at(kPlus, n + 1), at(kMinus, n)) = c;
        }
      }
      break;
  }
  return h;
}

SpinPhononState evolve(const SpinPhononState& state, HamiltonianTag tag,
                       const HamiltonianParams& params, double t) {
  if (!std::isfinite(t)) throw DomainError("evolve: duration must be finite");
  const double start_tail = state.tail_occupancy(2);
  if (start_tail >= 1e-8) {
    std::ostringstream os;
    os << "evolve: top two Fock levels hold " << start_tail
       << " before evolution; increase the truncation dimension (now " << state.dim() << ")";
    throw TruncationError(os.str());
  }
  const Eigen::MatrixXcd h = hamiltonian(tag, params, state.basis(), state.dim());
  SpinPhononState out = state;
  Eigen::VectorXcd& psi = out.amplitudes();
  for (const auto& block : blocks(h)) {
    const auto n = ix(block.size());
    Eigen::MatrixXcd hb(n, n);
    Eigen::VectorXcd vb(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      vb[i] = psi[ix(block[static_cast<std::size_t>(i)])];
      for (Eigen::Index j = 0; j < n; ++j) {
        hb(i, j) = h(ix(block[static_cast<std::size_t>(i)]), ix(block[static_cast<std::size_t>(j)]));
      }
    }
    const Eigen::MatrixXcd u = (hb * cd(0.0, -t)).exp();
    const Eigen::VectorXcd vb2 = u * vb;
    for (Eigen::Index i = 0; i < n; ++i) psi[ix(block[static_cast<std::size_t>(i)])] = vb2[i];
  }
  out.renormalize();
  const double top = out.tail_occupancy(1);
  out.add_leak(top);
  if (top > 1e-6) {
    std::ostringstream os;
    os << "evolve: top Fock level holds " << top << " after " << to_string(tag)
       << " evolution; increase the truncation dimension (now " << state.dim() << ")";
    throw TruncationError(os.str());
  }
  return out;
}

SpinPhononState run_sequence(const SpinPhononState& state, const PulseSequence& seq) {
  SpinPhononState s = state;
  for (const auto& step : seq) {
    if (!(step.duration > 0.0)) throw DomainError("run_sequence: pulse durations must be > 0");
    s = evolve(s, step.tag, step.params, step.duration);
  }
  return s;
}

double spin_coupling(const Particle& p, double omega_m, double gradient) {
  if (!(gradient >= 0.0)) throw DomainError("spin_coupling: gradient must be >= 0");
  return constants::kSpinG * constants::kBohrMagneton * gradient *
         zero_point_fluctuation(p.mass(), omega_m) / kHbar;
}

FockPreparation prepare_fock(std::size_t n, double lambda, std::size_t dim) {
  if (!(lambda > 0.0)) throw DomainError("prepare_fock: lambda must be > 0");
  if (dim < n + 5) {
    std::ostringstream os;
    os << "prepare_fock: dimension " << dim << " too small for |" << n << ">; need >= " << n + 5;
    throw TruncationError(os.str());
  }
  const double t1 = kPi / (2.0 * lambda);
  FockPreparation out{{}, SpinPhononState::basis_state(SpinBasis::Dressed, dim, kPlus, 0),
                      SpinPhononState::basis_state(SpinBasis::Dressed, dim, n % 2 ? kMinus : kPlus, n),
                      0.0};
  for (std::size_t i = 1; i <= n; ++i) {
    PulseStep step;
    step.tag = i % 2 ? HamiltonianTag::JC : HamiltonianTag::AJC;
    step.duration = t1 / std::sqrt(static_cast<double>(i));
    step.params.lambda = lambda;
    out.sequence.push_back(step);
  }
  out.state = run_sequence(out.state, out.sequence);
  out.fidelity = fidelity(out.state, out.target);
  return out;
}

DispersiveShift qnd_shift(double rabi, double lambda, double omega_m) {
  const double denom = 4.0 * rabi * rabi - omega_m * omega_m;
  if (denom == 0.0) throw DomainError("qnd_shift: resonant drive |Omega| = omega_m / 2");
  DispersiveShift d;
  d.chi = 4.0 * rabi * lambda * lambda / denom;
  d.valid = std::fabs(std::fabs(rabi) - 0.5 * omega_m) >= 5.0 * lambda;
  return d;
}

QndReadout qnd_readout(const SpinPhononState& state, double chi, double t) {
  if (state.basis() != SpinBasis::Dressed) {
    throw DomainError("qnd_readout: requires the dressed spin basis");
  }
  QndReadout r{state.phonon_populations(), {}, 0.0, 0.0, state};
  HamiltonianParams hp;
  hp.chi = chi;
  r.state = evolve(state, HamiltonianTag::QND, hp, t);
  r.phases.assign(state.dim(), 0.0);
  cd coherence = 0.0;
  for (std::size_t n = 0; n < state.dim(); ++n) {
    const cd rel = state.amplitude(kMinus, n) * std::conj(state.amplitude(kPlus, n));
    const double phi0 = std::abs(rel) > 0.0 ? std::arg(rel) : 0.0;
    r.phases[n] = phi0 + 2.0 * chi * static_cast<double>(n) * t;
    r.fringe += r.populations[n] * std::cos(r.phases[n]);
    coherence += std::conj(r.state.amplitude(kPlus, n)) * r.state.amplitude(kMinus, n);
  }
  r.fringe_from_state = 2.0 * coherence.real();
  return r;
}

double CatResult::fringe_period(double t) const {
  if (!(d_m > 0.0)) throw DomainError("fringe_period: zero separation has no fringes");
  return 2.0 * kPi * kHbar * t / (mass * d_m);
}

std::size_t cat_dimension(double lambda, double omega, std::size_t n_m) {
  const double r = 2.0 * std::fabs(lambda) / omega + std::sqrt(static_cast<double>(n_m));
  return std::max<std::size_t>(32, static_cast<std::size_t>(std::ceil(r * r + 6.0 * r + 10.0)));
}

SpinPhononState disentangle(const SpinPhononState& split, int sign) {
  if (split.basis() != SpinBasis::Triplet) throw DomainError("disentangle: requires triplet basis");
  if (sign != 1 && sign != -1) throw DomainError("disentangle: sign must be +1 or -1");
  SpinPhononState out = split;
  const auto d = ix(split.dim());
  Eigen::VectorXcd& psi = out.amplitudes();
  const Eigen::VectorXcd u = split.amplitudes().segment(ix(kUp) * d, d);
  const Eigen::VectorXcd v = split.amplitudes().segment(ix(kDown) * d, d);
  psi.setZero();
  psi.segment(ix(kZero) * d, d) = u + static_cast<double>(sign) * v;
  out.renormalize();
  return out;
}

CatResult cat_protocol(const Particle& p, double omega_m2, double gradient, std::size_t n_m,
                       std::size_t dim, int sign) {
  if (!(omega_m2 > 0.0)) throw DomainError("cat_protocol: trap frequency must be > 0");
  CatResult r{0.0, 0.0, 0.0, 0.0, p.mass(), omega_m2, 0,
              SpinPhononState(SpinBasis::Triplet, 2), SpinPhononState(SpinBasis::Triplet, 2)};
  r.lambda = spin_coupling(p, omega_m2, gradient);
  r.a2 = zero_point_fluctuation(p.mass(), omega_m2);
  r.d_m = 8.0 * r.lambda * r.a2 / omega_m2;
  r.dim = dim == 0 ? cat_dimension(r.lambda, omega_m2, n_m) : dim;
  if (n_m + 3 > r.dim) throw TruncationError("cat_protocol: dimension too small for the initial Fock state");

  Eigen::VectorXcd spin(3);
  spin << 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd phonon = Eigen::VectorXcd::Zero(ix(r.dim));
  phonon[ix(n_m)] = 1.0;
  const auto start = SpinPhononState::product(SpinBasis::Triplet, spin, phonon);
  HamiltonianParams hp;
  hp.lambda = r.lambda;
  hp.omega_m = omega_m2;
  r.split = evolve(start, HamiltonianTag::CAT, hp, kPi / omega_m2);
  r.d_m_numeric =
      r.a2 * std::fabs(r.split.branch_quadrature(kUp) - r.split.branch_quadrature(kDown));
  r.cat = disentangle(r.split, sign);
  return r;
}

std::vector<double> fringe_pattern(double mass, double omega, double d_m, double t, int sign,
                                   const std::vector<double>& z) {
  if (!(t >= 0.0)) throw DomainError("fringe_pattern: time must be >= 0");
  const double s0 = zero_point_fluctuation(mass, omega);
  const double tau = omega * t;
  const double st2 = s0 * s0 * (1.0 + tau * tau);
  const double d = 0.5 * d_m;
  const double k = d * tau / st2;
  const double sg = sign >= 0 ? 1.0 : -1.0;
  const double norm = 2.0 * std::sqrt(2.0 * kPi * st2) * (1.0 + sg * std::exp(-d * d / (2.0 * s0 * s0)));
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double x = z[i];
    out[i] = (std::exp(-(x - d) * (x - d) / (2.0 * st2)) + std::exp(-(x + d) * (x + d) / (2.0 * st2)) +
              2.0 * sg * std::exp(-(x * x + d * d) / (2.0 * st2)) * std::cos(k * x)) /
             norm;
  }
  return out;
}

double exact_fringe_period(double mass, double omega, double d_m, double t) {
  if (!(d_m > 0.0) || !(t > 0.0)) throw DomainError("exact_fringe_period: need D_m > 0 and t > 0");
  const double s0 = zero_point_fluctuation(mass, omega);
  const double tau = omega * t;
  return 2.0 * kPi * s0 * s0 * (1.0 + tau * tau) / (0.5 * d_m * tau);
}

Eigen::MatrixXd quench_overlap(double omega1, double omega2, std::size_t dim) {
  if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw DomainError("quench_overlap: frequencies must be > 0");
  // Lengths in units of the omega1 oscillator length; the omega2 functions are
  // r^{1/4} h_k(sqrt(r) x) with r = omega2 / omega1.
  const double r = omega2 / omega1;
  const double sr = std::sqrt(r);
  const double reach = std::sqrt(2.0 * static_cast<double>(dim) + 1.0) * std::max(1.0, 1.0 / sr) + 12.0;
  const double h = 0.02 * std::min(1.0, 1.0 / sr);
  const auto points = static_cast<std::size_t>(std::ceil(2.0 * reach / h));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ix(dim), ix(dim));
  std::vector<double> a, b;
  for (std::size_t i = 0; i <= points; ++i) {
    const double x = -reach + static_cast<double>(i) * h;
    hermite_functions(x, dim, a);
    hermite_functions(sr * x, dim, b);
    for (std::size_t k = 0; k < dim; ++k) {
      if (b[k] == 0.0) continue;
      for (std::size_t n = 0; n < dim; ++n) out(ix(k), ix(n)) += b[k] * a[n];
    }
  }
  return out * (std::pow(r, 0.25) * h);
}

SpinPhononState quench(const SpinPhononState& state, double omega1, double omega2) {
  const Eigen::MatrixXcd o = quench_overlap(omega1, omega2, state.dim()).cast<cd>();
  SpinPhononState out = state;
  const auto d = ix(state.dim());
  for (std::size_t s = 0; s < state.levels(); ++s) {
    out.amplitudes().segment(ix(s) * d, d) = o * state.amplitudes().segment(ix(s) * d, d);
  }
  const double kept = out.amplitudes().squaredNorm() / state.amplitudes().squaredNorm();
  out.add_leak(std::max(0.0, 1.0 - kept));
  out.renormalize();
  return out;
}

}  // namespace levitsim
