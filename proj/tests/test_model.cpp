#include <cmath>

#include "doctest.h"
#include "levitsim/errors.hpp"
#include "levitsim/model.hpp"

using namespace levitsim;
using doctest::Approx;

TEST_CASE("sphere mass from radius and density") {
  // (4/3) pi r^3 rho by hand.
  CHECK(mass_of(Particle(50e-9, 2000.0, 2.1)) == Approx(1.0472e-18).epsilon(1e-4));
  CHECK(mass_of(Particle(15e-9, 3500.0, 5.7)) == Approx(4.948e-20).epsilon(1e-3));
}

TEST_CASE("particle invariants are enforced at construction") {
  CHECK_THROWS_AS(Particle(50e-9, 0.0, 2.1), DomainError);
  CHECK_THROWS_AS(Particle(0.0, 2000.0, 2.1), DomainError);
  CHECK_THROWS_AS(Particle(50e-9, 2000.0, 1.0), DomainError);
  CHECK_THROWS_AS(GasEnvironment(-1.0, 300.0), DomainError);
  CHECK_THROWS_AS(GasEnvironment(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(TrapConfig({1.0, 0.0, 1.0}, 1064e-9, 1.0), DomainError);
  CHECK_THROWS_AS(CavityConfig(0.0, 1e-5, 1e5, 1e15), DomainError);
  CHECK_THROWS_AS(validate(DriveConfig{0.0, -1.0, 0.0}), DomainError);
}

TEST_CASE("polarizability approaches 3 eps0 V for large permittivity") {
  const Particle p(50e-9, 2000.0, 2.1);
  CHECK(p.polarizability() > 0.0);
  CHECK(p.polarizability() ==
        Approx(3.0 * constants::kEpsilon0 * p.volume() * 1.1 / 4.1).epsilon(1e-12));
  const Particle metal_like(50e-9, 2000.0, 1e9);
  CHECK(metal_like.polarizability() ==
        Approx(3.0 * constants::kEpsilon0 * metal_like.volume()).epsilon(1e-8));
}

TEST_CASE("zero-point fluctuation") {
  const double m = 4.95e-20;
  CHECK(zero_point_fluctuation(m, units::hz_to_rad(0.5e6)) == Approx(1.84e-11).epsilon(5e-3));
  CHECK(zero_point_fluctuation(m, units::hz_to_rad(20e3)) == Approx(9.2e-11).epsilon(5e-3));
  const double w = 1e5;
  CHECK(zero_point_fluctuation(m, 4.0 * w) == Approx(0.5 * zero_point_fluctuation(m, w)));
  CHECK_THROWS_AS(zero_point_fluctuation(0.0, w), DomainError);
  CHECK_THROWS_AS(zero_point_fluctuation(m, -1.0), DomainError);
}

TEST_CASE("thermal occupation of the feedback-cooled y mode") {
  const double w = units::hz_to_rad(9095.0);
  CHECK(thermal_occupation(297.0, w) == Approx(6.8e8).epsilon(0.01));
  CHECK(thermal_occupation(1.5e-3, w) == Approx(3400.0).epsilon(0.02));
  CHECK(thermal_occupation(0.0, w) == 0.0);
  CHECK_THROWS_AS(thermal_occupation(1.0, 0.0), DomainError);
}

TEST_CASE("pressure unit conversions are invertible") {
  CHECK(units::torr_to_pa(1.0) == Approx(133.322).epsilon(1e-5));
  CHECK(units::mbar_to_pa(1.0) == 100.0);
  for (double p : {1e-10, 3.7e-5, 1.0, 637.0, 1.2e5}) {
    CHECK(std::fabs(units::pa_to_torr(units::torr_to_pa(p)) - p) <= 1e-12 * p);
    CHECK(std::fabs(units::pa_to_mbar(units::mbar_to_pa(p)) - p) <= 1e-12 * p);
  }
}

TEST_CASE("cavity mode volumes and aligned trap point") {
  const auto cav = CavityConfig::with_aligned_trap(1e-2, 20e-6, 1e5, 1.77e15);
  CHECK(cav.mode_volume_tem00() == Approx(constants::kPi / 4.0 * 1e-2 * 4e-10));
  CHECK(cav.mode_volume_tem01() == Approx(cav.mode_volume_tem00() / 4.0));
  CHECK(cav.trap_position()[0] == Approx(5e-6));
  CHECK(cav.mode_phases()[0] == Approx(constants::kPi / 4.0));
}

TEST_CASE("gas mean speed") {
  const GasEnvironment g(1.0, 300.0);
  CHECK(g.mean_speed() ==
        Approx(std::sqrt(8.0 * constants::kBoltzmann * 300.0 /
                         (constants::kPi * constants::kAirMoleculeMass))));
}
