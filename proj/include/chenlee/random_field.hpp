#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "chenlee/errors.hpp"
#include "chenlee/fourier_field.hpp"

namespace chenlee {

/// Recipe for a reproducible random real field. profile_exponent = a means
/// the expected coefficient size is <k>^{-a} with <k> = (1+k^2)^{1/2}.
struct RandomFieldSpec {
  int K = 64;
  double profile_exponent = 1.0;
  std::uint64_t seed = 1;
};

/// Profile targeting H^s roughness: <k>^{-(s + 0.51)} puts the field just
/// inside H^s (the tail sum carries exponent -1.02).
inline double default_profile_exponent(double s) { return s + 0.51; }

namespace detail {

// Box-Muller on top of mt19937_64. std::normal_distribution is
// implementation-defined, which would unpin the acceptance baselines.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const double u1 = unit_open();
    const double u2 = unit_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

 private:
  double unit_open() {
    // in (0,1]: avoids log(0)
    return (double(gen_() >> 11) + 1.0) * 0x1p-53;
  }
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_ = false;
};

}  // namespace detail

/// Conjugate-symmetric Gaussian field: u_hat(k) = <k>^{-a} (g1 + i g2)/sqrt(2)
/// for k >= 1, real Gaussian at k = 0. Identical seeds give identical fields.
inline FourierField random_field(const RandomFieldSpec& spec) {
  if (spec.K < 1) throw precondition_error("random_field: K must be >= 1");
  detail::GaussianStream g(spec.seed);
  FourierField u(spec.K, true);
  u.set(0, cdouble(g.next(), 0.0));
  const double inv_sqrt2 = 0.7071067811865476;
  for (int k = 1; k <= spec.K; ++k) {
    const double w = std::pow(1.0 + double(k) * double(k), -spec.profile_exponent / 2.0);
    const cdouble c = w * inv_sqrt2 * cdouble(g.next(), g.next());
    u.set(k, c);
    u.set(-k, std::conj(c));
  }
  return u;
}

/// Rescale so that ||u||_{H^s} == target. Zero fields are rejected: there
/// is no scale that fixes their norm.
inline FourierField normalize_to(const FourierField& u, double s, double target) {
  const double n = sobolev_norm(u, s);
  if (!(n > 0.0)) throw precondition_error("normalize_to: field has zero norm");
  return (target / n) * u;
}

}  // namespace chenlee
