#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "ewsim/constants.hpp"
#include "ewsim/kinematics.hpp"
#include "ewsim/molasses.hpp"
#include "ewsim/rng.hpp"
#include "ewsim/species.hpp"

using namespace ewsim;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("rb87 parameter set is self-consistent") {
  const AtomSpecies s = rb87();
  CHECK_NOTHROW(s.validate());
  CHECK(s.mass == doctest::Approx(1.4432e-25).epsilon(1e-12));
  CHECK(s.lambda_d1 > s.lambda_d2);
  CHECK(s.delta_fs > s.delta_ghf);
  CHECK(s.linewidth(LaserLine::d1) == s.gamma_d1);
  CHECK(s.wavelength(LaserLine::d2) == s.lambda_d2);

  AtomSpecies broken = s;
  broken.lambda_d1 = s.lambda_d2 / 2;  // D1 must be the longer wavelength
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  broken = s;
  broken.mass = 0;
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("impact momentum and energy for the 6 mm reference drop") {
  const AtomSpecies s = rb87();
  const double p = impact_momentum(s, 6e-3);
  // In units of the 780 nm photon recoil.
  CHECK(momentum_in_recoil_units(p, 780e-9) == doctest::Approx(58.2894852573).epsilon(1e-9));

  const double e = impact_energy(s, 6e-3);
  CHECK(energy_as_temperature(e) == doctest::Approx(0.615266820169e-3).epsilon(1e-9));
  CHECK(energy_as_frequency(e) == doctest::Approx(12.8200803911e6).epsilon(1e-9));

  CHECK(impact_momentum(s, 0.0) == 0.0);
  CHECK_THROWS_AS(impact_momentum(s, -1e-3), std::domain_error);
  CHECK_THROWS_AS(momentum_in_recoil_units(p, 0.0), std::domain_error);
}

TEST_CASE("recoil frequency and Lamb-Dicke parameter") {
  const AtomSpecies s = rb87();
  CHECK(recoil_frequency(s, 780e-9) ==
        doctest::Approx(kTwoPi * 3773.20419135).epsilon(1e-9));
  // Reference trap: 480 kHz lattice about the dark-state node.
  CHECK(lamb_dicke(s, 780e-9, kTwoPi * 480e3) ==
        doctest::Approx(0.0886613899356).epsilon(1e-9));
  CHECK(lamb_dicke(s, 780e-9, kTwoPi * 480e3) < 0.1);  // strong-confinement regime
  CHECK_THROWS_AS(lamb_dicke(s, 780e-9, 0.0), std::domain_error);
}

TEST_CASE("trajectory rng streams are reproducible and distinct") {
  TrajectoryRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_bits();
    CHECK(va == b.next_bits());
    differs_c |= va != c.next_bits();
    differs_d |= va != d.next_bits();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("uniform draws stay inside their half-open ranges") {
  TrajectoryRng r(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double up = r.uniform_pos();
    CHECK(up > 0.0);
    CHECK(up <= 1.0);
    CHECK(std::isfinite(std::log(up)));
  }
}

TEST_CASE("uniform and normal moments match within 4 sigma") {
  TrajectoryRng r(2024, 3);
  const int n = 400000;
  double su = 0, suu = 0, sn = 0, snn = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    su += u;
    suu += u * u;
    const double g = r.normal();
    CHECK(std::isfinite(g));
    sn += g;
    snn += g * g;
  }
  const double mu = su / n;
  const double var_u = suu / n - mu * mu;
  CHECK(std::abs(mu - 0.5) < 4.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(var_u - 1.0 / 12.0) < 4.0 * (1.0 / 12.0) * std::sqrt(2.0 / n));
  const double mn = sn / n;
  const double var_n = snn / n - mn * mn;
  CHECK(std::abs(mn) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var_n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("thermal velocity spread follows the equipartition form") {
  const AtomSpecies s = rb87();
  CHECK(thermal_sigma_v(s, 10e-6) ==
        doctest::Approx(std::sqrt(constants::k_B * 10e-6 / s.mass)).epsilon(1e-15));
  CHECK(thermal_sigma_v(s, 40e-6) == doctest::Approx(2.0 * thermal_sigma_v(s, 10e-6)));
}

TEST_CASE("release sampler reproduces the configured cloud moments") {
  MolassesConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  const AtomSpecies s = rb87();
  const double sigma_v = thermal_sigma_v(s, cfg.temperature);

  const int n = 200000;
  double sz = 0, szz = 0, sv = 0, svv = 0;
  for (int i = 0; i < n; ++i) {
    TrajectoryRng rng(5, static_cast<std::uint64_t>(i));
    const KinematicState st = sample_release(cfg, s, rng);
    CHECK(st.t == 0.0);
    sz += st.z;
    szz += st.z * st.z;
    sv += st.v;
    svv += st.v * st.v;
  }
  const double mz = sz / n, mv = sv / n;
  const double sd_z = std::sqrt(szz / n - mz * mz);
  const double sd_v = std::sqrt(svv / n - mv * mv);
  const double rt_n = std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mz - cfg.drop_height) < 4.0 * cfg.sigma_z / rt_n);
  CHECK(std::abs(mv) < 4.0 * sigma_v / rt_n);
  CHECK(std::abs(sd_z - cfg.sigma_z) < 4.0 * cfg.sigma_z / std::sqrt(2.0 * n));
  CHECK(std::abs(sd_v - sigma_v) < 4.0 * sigma_v / std::sqrt(2.0 * n));
}

TEST_CASE("molasses config validation rejects nonphysical values") {
  MolassesConfig cfg;
  cfg.temperature = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.sigma_z = -1e-4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.drop_height = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.n_atoms = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("free fall from rest over 6 mm reproduces the impact speed") {
  const AtomSpecies s = rb87();
  const double edge = 2.06e-6;
  const KinematicState arrival = free_fall_to_mirror({6e-3 + edge, 0.0, 0.0}, edge);
  CHECK(std::abs(arrival.v) ==
        doctest::Approx(impact_momentum(s, 6e-3) / s.mass).epsilon(1e-12));
  CHECK(arrival.v < 0);
  CHECK(arrival.z == edge);

  // Height equation holds at the reported arrival time.
  const double z_check =
      (6e-3 + edge) - 0.5 * constants::g_earth * arrival.t * arrival.t;
  CHECK(z_check == doctest::Approx(edge).epsilon(1e-9));
}

TEST_CASE("free fall handles launches and degenerate heights") {
  const double edge = 2e-6;
  // Release at the edge itself: the identity map.
  const KinematicState same = free_fall_to_mirror({edge, -0.1, 1.5}, edge);
  CHECK(same.z == edge);
  CHECK(same.v == doctest::Approx(-0.1));
  CHECK(same.t == doctest::Approx(1.5));

  // Upward launch comes back down with the energy-conserving speed.
  const KinematicState up = free_fall_to_mirror({5e-3, +0.2, 0.0}, edge);
  const double expect =
      std::sqrt(0.2 * 0.2 + 2.0 * constants::g_earth * (5e-3 - edge));
  CHECK(up.v == doctest::Approx(-expect).epsilon(1e-12));
  CHECK(up.t > 0);

  CHECK_THROWS_AS(free_fall_to_mirror({1e-3, 0.0, 0.0}, -1e-6), std::domain_error);
  CHECK_THROWS_AS(free_fall_to_mirror({1e-6, 0.0, 0.0}, 2e-6), std::domain_error);
}

TEST_CASE("ballistic flight preserves phase-space volume") {
  // The flux form of Liouville's theorem for the fall-to-edge map
  // (z0, v0) -> (t_arrival, v_arrival): |det J| = 1 / |v_arrival|, which is
  // equivalent to the fixed-time map having unit determinant.
  const double edge = 2.06e-6;
  const double z0 = 6e-3, v0 = 0.05;
  const double hz = 1e-9, hv = 1e-7;

  auto arrive = [&](double z, double v) { return free_fall_to_mirror({z, v, 0.0}, edge); };
  const KinematicState base = arrive(z0, v0);
  const KinematicState pz = arrive(z0 + hz, v0), mz = arrive(z0 - hz, v0);
  const KinematicState pv = arrive(z0, v0 + hv), mv = arrive(z0, v0 - hv);

  const double dt_dz = (pz.t - mz.t) / (2 * hz);
  const double dt_dv = (pv.t - mv.t) / (2 * hv);
  const double dvi_dz = (pz.v - mz.v) / (2 * hz);
  const double dvi_dv = (pv.v - mv.v) / (2 * hv);
  const double det = dt_dz * dvi_dv - dt_dv * dvi_dz;
  CHECK(std::abs(det) * std::abs(base.v) == doctest::Approx(1.0).epsilon(1e-6));
}
