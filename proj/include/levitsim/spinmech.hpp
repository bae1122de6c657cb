#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levitsim/model.hpp"

namespace levitsim {

/// NV spin drive and magnetic gradient.
struct SpinConfig {
  double gradient = 0.0;   // G [T/m]
  double rabi = 0.0;       // effective Omega [rad/s]
  double detuning = 0.0;   // microwave detuning [rad/s]
};

void validate(const SpinConfig& s);

/// Spin part of the product basis. Index of |s, n> is s * dim + n.
enum class SpinBasis {
  Dressed,  // {|+>, |->}
  Triplet   // {|0>, |+1>, |-1>}
};

std::size_t spin_levels(SpinBasis b) noexcept;
std::string to_string(SpinBasis b);

class SpinPhononState {
 public:
  SpinPhononState(SpinBasis basis, std::size_t dim);

  /// |spin> (x) |n>.
  static SpinPhononState basis_state(SpinBasis basis, std::size_t dim, std::size_t spin,
                                     std::size_t n);
  /// Product of a spin vector and a phonon vector.
  static SpinPhononState product(SpinBasis basis, const Eigen::VectorXcd& spin,
                                 const Eigen::VectorXcd& phonon);

  SpinBasis basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t levels() const noexcept { return spin_levels(basis_); }
  std::size_t index(std::size_t spin, std::size_t n) const noexcept { return spin * dim_ + n; }

  const Eigen::VectorXcd& amplitudes() const noexcept { return psi_; }
  Eigen::VectorXcd& amplitudes() noexcept { return psi_; }
  std::complex<double> amplitude(std::size_t spin, std::size_t n) const {
    return psi_[static_cast<Eigen::Index>(index(spin, n))];
  }

  double norm() const { return psi_.norm(); }
  /// Accumulated top-level occupancy over all evolutions.
  double leak() const noexcept { return leak_; }
  /// Accumulated |norm - 1| observed before each renormalisation.
  double norm_drift() const noexcept { return norm_drift_; }
  bool valid() const noexcept { return leak_ < 1e-6; }

  /// Phonon-number distribution summed over spin.
  std::vector<double> phonon_populations() const;
  /// Total occupancy of the highest k Fock levels.
  double tail_occupancy(std::size_t k) const;
  double mean_phonons() const;
  /// <a + a^dagger> restricted to one spin branch, normalised by that branch's weight.
  double branch_quadrature(std::size_t spin) const;
  /// Reduced spin density matrix.
  Eigen::MatrixXcd spin_density() const;

  void renormalize();
  void add_leak(double x) noexcept { leak_ += x; }

 private:
  SpinBasis basis_;
  std::size_t dim_;
  Eigen::VectorXcd psi_;
  double leak_ = 0.0;
  double norm_drift_ = 0.0;
};

/// |<a|b>|^2.
double fidelity(const SpinPhononState& a, const SpinPhononState& b);

enum class HamiltonianTag {
  JC,         // lambda (sigma+ a + sigma- a^dagger)
  AJC,        // lambda (sigma+ a^dagger + sigma- a)
  QND,        // chi sigma_z a^dagger a
  FREE,       // omega_m a^dagger a + Omega sigma_z
  CAT,        // omega_m a^dagger a + lambda S_z (a + a^dagger), triplet basis
  Effective   // omega_m a^dagger a + Omega sigma_z + lambda sigma_x (a + a^dagger)
};

std::string to_string(HamiltonianTag t);
HamiltonianTag hamiltonian_from_string(const std::string& s);

struct HamiltonianParams {
  double lambda = 0.0;
  double chi = 0.0;
  double omega_m = 0.0;
  double rabi = 0.0;  // Omega
};

/// Dense Hamiltonian (units of hbar) in the state's product basis.
Eigen::MatrixXcd hamiltonian(HamiltonianTag tag, const HamiltonianParams& params, SpinBasis basis,
                             std::size_t dim);

/// Unitary evolution exp(-i H t). Requires the top two Fock levels to hold < 1e-8
/// at the start; throws TruncationError if the top level exceeds 1e-6 afterwards.
SpinPhononState evolve(const SpinPhononState& state, HamiltonianTag tag,
                       const HamiltonianParams& params, double t);

struct PulseStep {
  HamiltonianTag tag = HamiltonianTag::JC;
  double duration = 0.0;
  HamiltonianParams params;
};

using PulseSequence = std::vector<PulseStep>;

SpinPhononState run_sequence(const SpinPhononState& state, const PulseSequence& seq);

/// lambda = g_s mu_B G a0 / hbar.
double spin_coupling(const Particle& p, double omega_m, double gradient);

struct FockPreparation {
  PulseSequence sequence;
  SpinPhononState state;
  SpinPhononState target;
  double fidelity = 0.0;
};

/// Alternating JC / anti-JC pulses of length pi / (2 lambda sqrt(i)) from |+, 0>.
/// The target is |+, n> for even n and |-, n> for odd n. Requires dim >= n + 5.
FockPreparation prepare_fock(std::size_t n, double lambda, std::size_t dim);

struct DispersiveShift {
  double chi = 0.0;
  bool valid = false;  // ||Omega| - omega_m / 2| >= 5 lambda
};

/// chi = 4 Omega lambda^2 / (4 Omega^2 - omega_m^2).
DispersiveShift qnd_shift(double rabi, double lambda, double omega_m);

struct QndReadout {
  std::vector<double> populations;  // phonon-number distribution
  std::vector<double> phases;       // relative spin phase per Fock level
  double fringe = 0.0;              // sum_n p_n cos(phi_n)
  double fringe_from_state = 0.0;   // 2 Re sum_n conj(c_{+,n}) c_{-,n} of the evolved state
  SpinPhononState state;
};

/// Evolves under chi sigma_z a^dagger a for time t and reports phi_n(t) = phi_n(0) + 2 chi n t.
QndReadout qnd_readout(const SpinPhononState& state, double chi, double t);

struct CatResult {
  double lambda = 0.0;
  double a2 = 0.0;
  double d_m = 0.0;          // 8 lambda a2 / omega
  double d_m_numeric = 0.0;  // centroid separation of the evolved branches
  double mass = 0.0;
  double omega = 0.0;
  std::size_t dim = 0;
  SpinPhononState split;     // entangled state at t = pi / omega
  SpinPhononState cat;       // after the disentangling map, spin in |0>

  /// 2 pi hbar t / (m D_m).
  double fringe_period(double t) const;
};

/// Default truncation max(32, ceil(r^2 + 6 r + 10)) with r = 2 lambda / omega + sqrt(n_m).
std::size_t cat_dimension(double lambda, double omega, std::size_t n_m);

/// Spin starts in (|+1> + |-1>)/sqrt(2), phonon in |n_m>. dim = 0 picks cat_dimension.
/// sign selects psi_+ or psi_- in the disentangling map.
CatResult cat_protocol(const Particle& p, double omega_m2, double gradient, std::size_t n_m,
                       std::size_t dim = 0, int sign = +1);

/// Conditional spin map |+1>|u> + |-1>|v>  ->  |0> (|u> + sign |v>), renormalised.
SpinPhononState disentangle(const SpinPhononState& split, int sign);

/// Exact time-of-flight density of two ground-state packets of width a2 at +/- D/2
/// released for time t, relative phase set by sign. Normalised to unit area.
std::vector<double> fringe_pattern(double mass, double omega, double d_m, double t, int sign,
                                   const std::vector<double>& z);

/// Exact fringe period 2 pi s0^2 (1 + tau^2) / ((D/2) tau), tau = omega t, s0 = a2.
double exact_fringe_period(double mass, double omega, double d_m, double t);

/// <n'_{omega2} | n_{omega1}> for an instantaneous trap-frequency change.
Eigen::MatrixXd quench_overlap(double omega1, double omega2, std::size_t dim);

/// Applies the quench to every spin branch of the state.
SpinPhononState quench(const SpinPhononState& state, double omega1, double omega2);

}  // namespace levitsim
