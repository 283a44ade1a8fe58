#include "chenlee/etd.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "chenlee/duhamel.hpp"
#include "chenlee/errors.hpp"
#include "chenlee/fitting.hpp"
#include "chenlee/fourier_field.hpp"
#include "chenlee/random_field.hpp"
#include "chenlee/symbols.hpp"

using namespace chenlee;

namespace {

const ModelParams kUnit{1.0, 1.0};

duhamel::SolverConfig base_config(int K, double T, int n_steps) {
  duhamel::SolverConfig cfg;
  cfg.params = kUnit;
  cfg.s = 1.0;
  cfg.K = K;
  cfg.T = T;
  cfg.n_steps = n_steps;
  return cfg;
}

FourierField seeded_state(int K, unsigned long long seed, double s, double amp) {
  RandomFieldSpec spec;
  spec.K = K;
  spec.seed = seed;
  spec.profile_exponent = default_profile_exponent(s);
  return normalize_to(random_field(spec), s, amp);
}

}  // namespace

namespace {

// independent long-double reference for phi_j, valid over the whole test range
cdouble reference_phi(cdouble z, int j) {
  const std::complex<long double> zl(z.real(), z.imag());
  long double fact = 1.0L;
  for (int n = 1; n <= j; ++n) fact *= n;
  std::complex<long double> term = 1.0L / fact;
  std::complex<long double> acc = term;
  for (int n = 1; n <= 40; ++n) {
    term *= zl / (long double)(n + j);
    acc += term;
  }
  return cdouble(double(acc.real()), double(acc.imag()));
}

}  // namespace

TEST(PhiFunctions, ValuesAtZeroAndIdentities) {
  EXPECT_EQ(duhamel::phi1(cdouble(0, 0)), cdouble(1.0, 0.0));
  EXPECT_EQ(duhamel::phi2(cdouble(0, 0)), cdouble(0.5, 0.0));
  EXPECT_EQ(duhamel::phi3(cdouble(0, 0)), cdouble(1.0 / 6.0, 0.0));
  for (const cdouble z : {cdouble(0.3, -1.2), cdouble(-2.0, 0.7), cdouble(1e-3, 1e-3)}) {
    EXPECT_NEAR(std::abs(duhamel::phi1(z) - (1.0 + z * duhamel::phi2(z))), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(duhamel::phi2(z) - (0.5 + z * duhamel::phi3(z))), 0.0, 1e-14);
  }
}

TEST(PhiFunctions, BothRepresentationsTrackReferenceSeries) {
  // the evaluation switches representation at |z| = 1e-2; points straddling
  // the threshold (and moderate arguments) must all match an independent
  // extended-precision series
  std::vector<cdouble> pts;
  for (double theta : {0.0, 1.1, 2.8, 4.4}) {
    const cdouble dir(std::cos(theta), std::sin(theta));
    pts.push_back(0.99e-2 * dir);
    pts.push_back(1.01e-2 * dir);
    pts.push_back(1.7 * dir);
  }
  // on closed-form territory the subtraction of the Taylor head costs about
  // eps / |z|^j, so tolerances scale accordingly; the series branch is exact
  const auto tolerance = [](cdouble z, int j) {
    if (std::abs(z) < 1e-2) return 1e-14;
    return 1e-14 + 2e-15 / std::pow(std::abs(z), j);
  };
  for (const cdouble z : pts) {
    EXPECT_NEAR(std::abs(duhamel::phi1(z) - reference_phi(z, 1)), 0.0, tolerance(z, 1)) << z;
    EXPECT_NEAR(std::abs(duhamel::phi2(z) - reference_phi(z, 2)), 0.0, tolerance(z, 2)) << z;
    EXPECT_NEAR(std::abs(duhamel::phi3(z) - reference_phi(z, 3)), 0.0, tolerance(z, 3)) << z;
  }
}

TEST(EnergyRate, MatchesSpectralSum) {
  FourierField u(4);
  u.set(2, cdouble(1.0, 0.0));
  u.set(-2, cdouble(1.0, 0.0));
  // modes +-2: 4 pi eta (|k| - k^2) |u|^2 summed = 4 pi (2 - 4) * 2 = -16 pi
  EXPECT_NEAR(duhamel::energy_rate(u, kUnit), -16.0 * M_PI, 1e-12);

  FourierField v(1);
  v.set(0, cdouble(3.0, 0.0));
  v.set(1, cdouble(0.5, 0.25));
  v.set(-1, std::conj(v.at(1)));
  EXPECT_EQ(duhamel::energy_rate(v, kUnit), 0.0);  // neutral modes dissipate nothing
}

TEST(EtdMarch, LinearStepEqualsSemigroup) {
  const FourierField phi = seeded_state(16, 5, 1.0, 1.0);
  auto cfg = base_config(16, 0.5, 1);
  cfg.include_nonlinearity = false;
  const Trajectory traj = duhamel::etd_march(phi, cfg);
  ASSERT_EQ(traj.size(), 2u);
  EXPECT_EQ(max_abs_diff(traj.fields[1], symbols::apply_semigroup(phi, 0.5, kUnit)), 0.0);
}

TEST(EtdMarch, LinearMultiStepTracksSemigroup) {
  const FourierField phi = seeded_state(16, 6, 1.0, 1.0);
  auto cfg = base_config(16, 1.0, 20);
  cfg.include_nonlinearity = false;
  const Trajectory traj = duhamel::etd_march(phi, cfg);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    // n compositions of the exact per-step factor vs one shot: only
    // rounding separates them
    EXPECT_LE(max_abs_diff(traj.fields[i],
                           symbols::apply_semigroup(phi, traj.times[i], kUnit)),
              40.0 * 1e-16);
  }
}

TEST(EtdMarch, UndampedModesStayOnTheCircle) {
  const FourierField phi = seeded_state(16, 7, 1.0, 1.0);
  auto cfg = base_config(16, 0.5, 16);
  cfg.include_nonlinearity = false;
  const Trajectory traj = duhamel::etd_march(phi, cfg);
  for (int k : {-1, 1}) {
    const double a0 = std::abs(phi.at(k));
    for (const auto& f : traj.fields)
      EXPECT_LE(std::abs(std::abs(f.at(k)) - a0), 1e-14);
  }
}

TEST(EtdMarch, FourthOrderConvergence) {
  // the asymptotic window: coarser grids are polluted by the stiffest
  // modes (h |z_K| ~ 10), finer ones by rounding
  const FourierField phi = seeded_state(16, 9, 1.0, 0.5);
  const double T = 0.5;
  const Trajectory ref = duhamel::etd_march(phi, base_config(16, T, 1600));
  std::vector<double> ns, errs;
  for (int n : {100, 200, 400}) {
    const Trajectory traj = duhamel::etd_march(phi, base_config(16, T, n));
    ns.push_back(n);
    errs.push_back(max_abs_diff(traj.fields.back(), ref.fields.back()));
  }
  const auto fit = fit_loglog(ns, errs);
  EXPECT_GT(-fit.slope, 3.5);
  EXPECT_LT(-fit.slope, 4.6);
}

TEST(EtdMarch, DissipationGuardTripsOnOversizedData) {
  const FourierField phi = seeded_state(32, 11, 1.0, 500.0);
  auto cfg = base_config(32, 1.0, 2);
  EXPECT_THROW(duhamel::etd_march(phi, cfg), numerical_error);
}

TEST(EtdMarch, MeanModeBitwiseConstant) {
  RandomFieldSpec spec;
  spec.K = 32;
  spec.seed = 13;
  FourierField phi = random_field(spec);
  phi.set(0, cdouble(0.375, 0.0));
  phi = normalize_to(phi, 1.0, 1.0);
  const cdouble mean = phi.at(0);
  const Trajectory traj = duhamel::etd_march(phi, base_config(32, 1.0, 64));
  for (const auto& f : traj.fields) EXPECT_EQ(f.at(0), mean);
}

TEST(EtdMarch, L2NeverGrowsAlongNonlinearRuns) {
  for (unsigned long long seed : {101ull, 102ull, 103ull}) {
    const FourierField phi = seeded_state(64, seed, 1.0, 1.0);
    const Trajectory traj = duhamel::etd_march(phi, base_config(64, 1.0, 200));
    double prev = l2_norm(traj.fields.front());
    for (std::size_t i = 1; i < traj.size(); ++i) {
      const double cur = l2_norm(traj.fields[i]);
      EXPECT_LE(cur, prev * (1.0 + 1e-10));
      prev = cur;
    }
  }
}

TEST(EtdMarch, RejectsBandMismatchAndBadSteps) {
  auto cfg = base_config(8, 1.0, 4);
  EXPECT_THROW(duhamel::etd_march(FourierField(4), cfg), precondition_error);
  cfg.n_steps = 0;
  EXPECT_THROW(duhamel::etd_march(FourierField(8), cfg), precondition_error);
}
