#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

#include "chenlee/errors.hpp"
#include "chenlee/etd.hpp"
#include "chenlee/fitting.hpp"
#include "chenlee/fourier_field.hpp"
#include "chenlee/params.hpp"

namespace chenlee::illposed {

/// The counterexample family: mass N^{-s} on modes N and 1-N, nothing
/// else. Intentionally not conjugate-symmetric; the field is flagged
/// complex so nothing downstream assumes a real function.
struct TwoModeData {
  int N = 2;
  double s = 0.0;
  FourierField field;
};

inline TwoModeData make_two_mode(int N, double s, int K) {
  if (N < 2) throw precondition_error("make_two_mode: N must be >= 2");
  if (K < 2 * N)
    throw precondition_error("make_two_mode: K must be >= 2N to hold the second iterate");
  TwoModeData d;
  d.N = N;
  d.s = s;
  d.field = FourierField(K, true);
  d.field.mark_complex();
  const double amp = std::pow(double(N), -s);
  d.field.set(N, cdouble(amp, 0.0));
  d.field.set(1 - N, cdouble(amp, 0.0));
  return d;
}

struct Resonance {
  double psi;    // phase mismatch between the product of free waves and the output wave
  double sigma;  // damping mismatch; negative means the pair outgrows the output mode
};

/// psi(k,j) = beta[(k-j)|k-j| - k|k| + j|j|],
/// sigma(k,j) = eta[(k-j)^2 - |k-j| - k^2 + |k| + j^2 - |j|].
/// Evaluated in integer arithmetic before scaling.
inline Resonance resonance(int k, int j, const ModelParams& p) {
  const long long a = k, b = j, d = (long long)k - j;
  const auto ll = [](long long v) { return v < 0 ? -v : v; };
  const long long psi_i = d * ll(d) - a * ll(a) + b * ll(b);
  const long long sigma_i =
      d * d - ll(d) - a * a + ll(a) + b * b - ll(b);
  return {p.beta * double(psi_i), p.eta * double(sigma_i)};
}

/// k = 1 coefficient of the second Picard iterate on two-mode data:
///   2 i e^{i beta t} N^{-2s} (e^{t(i psi - sigma)} - 1)/(i psi - sigma)
/// with psi = 2 beta (N-1), sigma = 2 eta (N-1)^2.
inline cdouble second_iterate_mode1(int N, double s, const ModelParams& p, double t) {
  if (N < 2) throw precondition_error("second_iterate_mode1: N must be >= 2");
  if (!(t > 0.0)) throw precondition_error("second_iterate_mode1: t must be > 0");
  p.validate();
  const Resonance r = resonance(1, N, p);
  const cdouble z = t * cdouble(-r.sigma, r.psi);
  return cdouble(0.0, 2.0) * std::polar(1.0, p.beta * t) *
         std::pow(double(N), -2.0 * s) * t * duhamel::phi1(z);
}

/// All modes of the second iterate. Exactly four (k, j) pairs contribute,
/// giving support {2N, 1, 2-2N}. Each term is assembled as
///   (ik) phi_hat(j) phi_hat(k-j) (e^A - e^B)/(i psi - sigma),
/// where A collects the pair's phases/damping and B the output mode's;
/// both have nonpositive real part, so nothing overflows even though
/// sigma(2N, N) = -2 eta N^2 makes the naive antiderivative blow up.
inline FourierField second_iterate_full(int N, double s, const ModelParams& p,
                                        double t, int K) {
  if (N < 2) throw precondition_error("second_iterate_full: N must be >= 2");
  if (K < 2 * N) throw precondition_error("second_iterate_full: K must be >= 2N");
  if (!(t > 0.0)) throw precondition_error("second_iterate_full: t must be > 0");
  p.validate();

  FourierField out(K, true);
  out.mark_complex();
  const double amp2 = std::pow(double(N), -2.0 * s);
  const int js[2] = {N, 1 - N};
  for (int j : js)
    for (int m : js) {
      const int k = j + m;  // m = k - j
      const cdouble ik(0.0, double(k));
      const cdouble A =
          t * cdouble(-(symbols::p_damp(j, p) + symbols::p_damp(m, p)),
                      symbols::q(j, p) + symbols::q(m, p));
      const cdouble B = t * cdouble(-symbols::p_damp(k, p), symbols::q(k, p));
      const cdouble z = A - B;  // t (i psi - sigma)
      cdouble integral;
      if (std::abs(z) < 1e-2)
        integral = std::exp(B) * t * duhamel::phi1(z);
      else
        integral = (std::exp(A) - std::exp(B)) / (z / t);
      out.set(k, out.at(k) + ik * amp2 * integral);
    }
  return out;
}

/// Quadrature route to the same object: second Picard iterate
/// A2 = duhamel_bilinear(u, u) with u the free evolution of the two-mode
/// data, evaluated at the final time. Independent of the closed form
/// above; agreement of the two routes validates both.
inline FourierField quadrature_second_iterate(int N, double s, const ModelParams& p,
                                              double t, int n_steps, int grading) {
  duhamel::SolverConfig cfg;
  cfg.params = p;
  cfg.s = s;
  cfg.K = 2 * N;
  cfg.T = t;
  cfg.n_steps = n_steps;
  cfg.first_step_grading = grading;
  const TwoModeData d = make_two_mode(N, s, cfg.K);
  const auto times = duhamel::uniform_times(t, n_steps);
  const Trajectory u = duhamel::free_evolution(d.field, times, p);
  return duhamel::duhamel_bilinear(u, u, cfg).fields.back();
}

struct QuadratureRefinement {
  FourierField value;
  int n_steps = 0;         // resolution the loop settled on
  double last_change = 0.0;  // max abs coefficient move in the final doubling
  bool stable = false;
};

/// Doubles the step count and extrapolates the resulting ladder. The node
/// interpolation inside duhamel_bilinear makes the raw quadrature second
/// order in the step, with an additional cubic term from the self-similar
/// first-step grading; two Richardson stages cancel both, so the
/// extrapolant converges at fourth order and the tight tolerances below
/// are reachable in a few thousand steps even when the pair damping
/// 2 eta (N^2 - N) squeezes the integrand into a thin layer at t' = 0.
/// Stops when one more doubling moves no extrapolated coefficient by more
/// than tol.
inline QuadratureRefinement refined_second_iterate(int N, double s, const ModelParams& p,
                                                   double t, double tol,
                                                   int max_steps = 1 << 18) {
  if (!(tol > 0.0)) throw precondition_error("refined_second_iterate: tol must be > 0");
  QuadratureRefinement out;
  int n = 32;
  const int grading = 10;
  std::vector<FourierField> ladder;
  ladder.push_back(quadrature_second_iterate(N, s, p, t, n, grading));
  FourierField extrap_prev(0);
  bool have_extrap = false;
  while (2 * n <= max_steps) {
    n *= 2;
    ladder.push_back(quadrature_second_iterate(N, s, p, t, n, grading));
    if (ladder.size() >= 3) {
      const std::size_t m = ladder.size();
      const FourierField r1a = (1.0 / 3.0) * (4.0 * ladder[m - 2] - ladder[m - 3]);
      const FourierField r1b = (1.0 / 3.0) * (4.0 * ladder[m - 1] - ladder[m - 2]);
      FourierField extrap = (1.0 / 7.0) * (8.0 * r1b - r1a);
      if (have_extrap) {
        out.last_change = max_abs_diff(extrap, extrap_prev);
        if (out.last_change <= tol) {
          out.value = std::move(extrap);
          out.n_steps = n;
          out.stable = true;
          return out;
        }
      }
      extrap_prev = std::move(extrap);
      have_extrap = true;
    }
  }
  if (have_extrap) {
    out.value = std::move(extrap_prev);
  } else {
    out.last_change =
        ladder.size() >= 2 ? max_abs_diff(ladder.back(), ladder[ladder.size() - 2]) : 0.0;
    out.value = std::move(ladder.back());
  }
  out.n_steps = n;
  return out;
}

struct InflationReport {
  double s = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  double t = 1.0;
  std::vector<int> Ns;
  std::vector<double> second_iterate_norms;  // H^s norms
  std::vector<cdouble> mode1;                // closed-form k=1 coefficients
  std::vector<double> mode1_fractions;       // share of the squared H^s norm at k=1
  double fitted_slope = 0.0;
  double slope_half_width = 0.0;
  double expected_slope = 0.0;  // -2(s+1)
  bool pass = false;
};

/// Growth of ||second iterate||_{H^s} in N at fixed t. For s < -1/2 the
/// fitted log-log slope must match -2(s+1) within 0.05 (norm inflation
/// when that is positive); for s >= -1/2 the norms must stay uniformly
/// bounded, within 2x of the first scan point.
inline InflationReport inflation_scan(double s, const ModelParams& p, double t,
                                      const std::vector<int>& Ns) {
  if (Ns.size() < 4)
    throw precondition_error("inflation_scan: degenerate fit, need at least 4 scan points");
  if (!(t > 0.0)) throw precondition_error("inflation_scan: t must be > 0");
  p.validate();

  InflationReport rep;
  rep.s = s;
  rep.beta = p.beta;
  rep.eta = p.eta;
  rep.t = t;
  rep.Ns = Ns;
  rep.expected_slope = -2.0 * (s + 1.0);

  std::vector<double> xs;
  for (int N : Ns) {
    const FourierField a2 = second_iterate_full(N, s, p, t, 2 * N);
    const double nrm = sobolev_norm(a2, s);
    rep.second_iterate_norms.push_back(nrm);
    rep.mode1.push_back(second_iterate_mode1(N, s, p, t));
    const double m1 = 2.0 * 3.141592653589793238462643383279502884 *
                      std::pow(2.0, s) * std::norm(a2.at(1));
    rep.mode1_fractions.push_back(m1 / (nrm * nrm));
    xs.push_back(double(N));
  }

  const LoglogFit fit = fit_loglog(xs, rep.second_iterate_norms);
  rep.fitted_slope = fit.slope;
  rep.slope_half_width = fit.half_width;

  if (s < -0.5) {
    rep.pass = std::abs(rep.fitted_slope - rep.expected_slope) <= 0.05;
  } else {
    double mx = 0.0;
    for (double n : rep.second_iterate_norms) mx = std::max(mx, n);
    rep.pass = mx <= 2.0 * rep.second_iterate_norms.front();
  }
  return rep;
}

}  // namespace chenlee::illposed
