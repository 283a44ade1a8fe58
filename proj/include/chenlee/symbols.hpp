#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>

#include "chenlee/errors.hpp"
#include "chenlee/fourier_field.hpp"
#include "chenlee/params.hpp"

namespace chenlee::symbols {

/// Dispersion symbol: beta * k * |k|. Odd in k, zero at k = 0.
inline double q(int k, const ModelParams& p) {
  return p.beta * double(k) * double(std::abs(k));
}

/// Net damping symbol: eta * (k^2 - |k|). Nonnegative; vanishes exactly on
/// k in {-1, 0, 1}, which is why those modes never decay.
inline double p_damp(int k, const ModelParams& p) {
  const double a = double(std::abs(k));
  return p.eta * (a * a - a);
}

/// Multiplier of the periodic Hilbert transform: i * sgn(k). This is the
/// unique choice under which -beta*H(u_xx) contributes i*q(k) and
/// eta*(H(u_x) - u_xx) contributes -p(k) to the linear evolution.
inline cdouble hilbert_multiplier(int k) {
  const double sgn = (k > 0) - (k < 0);
  return cdouble(0.0, sgn);
}

/// One Fourier mode of the linear solution operator: e^{(i q(k) - p(k)) t}.
/// Modulus <= 1 always, with equality exactly on k in {-1, 0, 1}.
inline cdouble semigroup_factor(int k, double t, const ModelParams& p) {
  if (!(t >= 0.0))
    throw precondition_error("semigroup_factor: t must be >= 0 (semigroup, not group)");
  return std::polar(std::exp(-p_damp(k, p) * t), q(k, p) * t);
}

inline FourierField apply_semigroup(const FourierField& u, double t, const ModelParams& p) {
  FourierField out(u.max_mode(), u.real_valued());
  for (int k = -u.max_mode(); k <= u.max_mode(); ++k)
    out.set(k, semigroup_factor(k, t, p) * u.at(k));
  return out;
}

/// Dispersive group alone: modewise e^{i q(k) t}, any real t, isometric on
/// every H^s.
inline FourierField apply_unitary_group(const FourierField& u, double t, const ModelParams& p) {
  FourierField out(u.max_mode(), u.real_valued());
  for (int k = -u.max_mode(); k <= u.max_mode(); ++k)
    out.set(k, std::polar(1.0, q(k, p) * t) * u.at(k));
  return out;
}

struct KernelSupBound {
  double sup_value;  // max over integers k of |t k^2|^lambda e^{eta(|k|-k^2)t}
  double bound;      // (t^lambda + eta^-lambda) e^{(eta/8)(t + sqrt(t) sqrt(t + 16 lambda/eta))}
  double x1;         // maximizer of the continuous envelope in x = sqrt(t)|k|
};

/// Sharp data for the kernel sup estimate. The continuous envelope
/// w_t(x) = x^{2 lambda} e^{eta(x sqrt(t) - x^2)} is unimodal with peak at
/// x1, so the lattice sup sits at an integer adjacent to x1/sqrt(t).
inline KernelSupBound lemma21_bound(double lambda, double t, const ModelParams& p) {
  if (!(lambda > 0.0)) throw precondition_error("lemma21_bound: lambda must be > 0");
  if (!(t > 0.0)) throw precondition_error("lemma21_bound: t must be > 0");
  p.validate();

  const double x1 =
      0.25 * (std::sqrt(t) + std::sqrt(t + 16.0 * lambda / p.eta));
  const double k_peak = x1 / std::sqrt(t);

  double sup = 0.0;
  const long k_hi = long(std::ceil(k_peak)) + 2;
  for (long k = 1; k <= k_hi; ++k) {
    const double kk = double(k);
    const double val =
        std::pow(t * kk * kk, lambda) * std::exp(p.eta * (kk - kk * kk) * t);
    if (val > sup) sup = val;
  }

  const double bound =
      (std::pow(t, lambda) + std::pow(p.eta, -lambda)) *
      std::exp(p.eta / 8.0 * (t + std::sqrt(t) * std::sqrt(t + 16.0 * lambda / p.eta)));
  return {sup, bound, x1};
}

/// l^2 norm over the integers of |k|^lambda e^{eta(|k|-k^2)t}, summed until
/// terms underflow past the peak. For lambda = 0 the three undamped modes
/// contribute 1 each, so the large-t limit is sqrt(3).
inline double kernel_l2_norm(double lambda, double t, const ModelParams& p) {
  if (!(t > 0.0)) throw precondition_error("kernel_l2_norm: t must be > 0");
  if (!(lambda >= 0.0)) throw precondition_error("kernel_l2_norm: lambda must be >= 0");
  p.validate();

  double acc = (lambda == 0.0) ? 1.0 : 0.0;  // k = 0 term
  double prev = acc;
  for (long k = 1;; ++k) {
    const double kk = double(k);
    const double term =
        std::pow(kk, 2.0 * lambda) * std::exp(2.0 * p.eta * (kk - kk * kk) * t);
    acc += 2.0 * term;  // modes +k and -k
    if (term < 1e-300 && term <= prev) break;
    prev = term;
  }
  return std::sqrt(acc);
}

/// Upsilon_eta^lambda(t) = 1 + (eta t)^{-lambda/2} + (eta t)^{-(1+2 lambda)/4}.
inline double upsilon(double lambda, double t, const ModelParams& p) {
  if (!(t > 0.0)) throw precondition_error("upsilon: t must be > 0");
  if (!(lambda >= 0.0)) throw precondition_error("upsilon: lambda must be >= 0");
  p.validate();
  const double et = p.eta * t;
  return 1.0 + std::pow(et, -lambda / 2.0) + std::pow(et, -(1.0 + 2.0 * lambda) / 4.0);
}

/// f_{s,eta}(t) = 1 + (t^{|s|/2} + eta^{-|s|/2}) e^{(eta/8)(t + sqrt(t) sqrt(t + 8|s|/eta))},
/// the growth envelope of the t^{|s|/2}-weighted L^2 smoothing bound.
/// Nondecreasing on [0,1].
inline double smoothing_factor(double s, double t, const ModelParams& p) {
  if (!(s < 0.0)) throw precondition_error("smoothing_factor: s must be < 0");
  if (!(t >= 0.0 && t <= 1.0))
    throw precondition_error("smoothing_factor: t must lie in [0,1]");
  p.validate();
  const double a = -s;  // |s|
  return 1.0 + (std::pow(t, a / 2.0) + std::pow(p.eta, -a / 2.0)) *
                   std::exp(p.eta / 8.0 *
                            (t + std::sqrt(t) * std::sqrt(t + 8.0 * a / p.eta)));
}

}  // namespace chenlee::symbols
