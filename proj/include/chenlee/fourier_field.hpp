#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

#include "chenlee/errors.hpp"
#include "chenlee/fft.hpp"

namespace chenlee {

using cdouble = std::complex<double>;

/// Truncated Fourier representation of a 2*pi-periodic function.
///
/// Coefficients follow the normalization
///     u_hat(k) = (1/2pi) * integral_{-pi}^{pi} e^{-ikz} u(z) dz,
/// stored for k = -K..K. A field normally represents a real function and
/// keeps u_hat(-k) == conj(u_hat(k)); intrinsically complex data (the
/// two-mode counterexample family) clears the real_valued flag instead of
/// faking symmetry.
class FourierField {
 public:
  FourierField() : max_mode_(0), real_valued_(true), c_(1, cdouble(0.0, 0.0)) {}

  explicit FourierField(int max_mode, bool real_valued = true)
      : max_mode_(checked_band(max_mode)),
        real_valued_(real_valued),
        c_(std::size_t(2 * max_mode + 1), cdouble(0.0, 0.0)) {}

  int max_mode() const { return max_mode_; }
  bool real_valued() const { return real_valued_; }
  void mark_complex() { real_valued_ = false; }

  /// Coefficient at mode k; modes outside the band read as zero.
  cdouble at(int k) const {
    if (k < -max_mode_ || k > max_mode_) return cdouble(0.0, 0.0);
    return c_[std::size_t(k + max_mode_)];
  }

  void set(int k, cdouble v) {
    if (k < -max_mode_ || k > max_mode_)
      throw precondition_error("FourierField::set: mode outside band");
    c_[std::size_t(k + max_mode_)] = v;
  }

  const std::vector<cdouble>& coeffs() const { return c_; }
  std::vector<cdouble>& coeffs() { return c_; }

 private:
  static int checked_band(int max_mode) {
    if (max_mode < 0) throw precondition_error("FourierField: max_mode must be >= 0");
    return max_mode;
  }

  int max_mode_;
  bool real_valued_;
  std::vector<cdouble> c_;  // index i holds mode k = i - max_mode_
};

inline bool is_conjugate_symmetric(const FourierField& u, double tol = 1e-12) {
  for (int k = 0; k <= u.max_mode(); ++k) {
    if (std::abs(u.at(-k) - std::conj(u.at(k))) > tol) return false;
  }
  return true;
}

inline FourierField operator+(const FourierField& a, const FourierField& b) {
  if (a.max_mode() != b.max_mode())
    throw precondition_error("field addition: max_mode mismatch");
  FourierField out(a.max_mode(), a.real_valued() && b.real_valued());
  for (std::size_t i = 0; i < out.coeffs().size(); ++i)
    out.coeffs()[i] = a.coeffs()[i] + b.coeffs()[i];
  return out;
}

inline FourierField operator-(const FourierField& a, const FourierField& b) {
  if (a.max_mode() != b.max_mode())
    throw precondition_error("field subtraction: max_mode mismatch");
  FourierField out(a.max_mode(), a.real_valued() && b.real_valued());
  for (std::size_t i = 0; i < out.coeffs().size(); ++i)
    out.coeffs()[i] = a.coeffs()[i] - b.coeffs()[i];
  return out;
}

inline FourierField operator*(double c, const FourierField& a) {
  FourierField out = a;
  for (auto& v : out.coeffs()) v *= c;
  return out;
}

/// Largest coefficient discrepancy over the union of the two bands.
inline double max_abs_diff(const FourierField& a, const FourierField& b) {
  const int K = std::max(a.max_mode(), b.max_mode());
  double m = 0.0;
  for (int k = -K; k <= K; ++k) m = std::max(m, std::abs(a.at(k) - b.at(k)));
  return m;
}

/// Samples u at x_j = 2*pi*j/n_points, j = 0..n_points-1.
/// n_points < 2K+1 would alias the band and is rejected.
inline std::vector<double> synthesize(const FourierField& u, int n_points) {
  const int K = u.max_mode();
  if (n_points < 2 * K + 1)
    throw precondition_error("synthesize: n_points < 2K+1 aliases the band");
  if (!u.real_valued())
    throw precondition_error("synthesize: field is flagged complex-valued");
  std::vector<double> f(std::size_t(n_points), 0.0);
  const double h = 2.0 * 3.141592653589793238462643383279502884 / double(n_points);
  for (int j = 0; j < n_points; ++j) {
    const double x = h * double(j);
    // Real synthesis: u_hat(0) + 2*sum_{k>=1} Re(u_hat(k) e^{ikx}).
    double acc = u.at(0).real();
    for (int k = 1; k <= K; ++k) {
      const cdouble e = std::polar(1.0, double(k) * x);
      acc += 2.0 * (u.at(k) * e).real();
    }
    f[std::size_t(j)] = acc;
  }
  return f;
}

/// Trapezoid realization of (1/2pi) * integral e^{-ikz} f(z) dz on the
/// uniform grid; exact for band-limited input with n >= 2K+1.
inline FourierField analyze(const std::vector<double>& samples) {
  const int n = int(samples.size());
  if (n < 1) throw precondition_error("analyze: empty sample array");
  const int K = (n - 1) / 2;
  FourierField u(K, true);
  const double h = 2.0 * 3.141592653589793238462643383279502884 / double(n);
  for (int k = 0; k <= K; ++k) {
    cdouble acc(0.0, 0.0);
    for (int j = 0; j < n; ++j)
      acc += samples[std::size_t(j)] * std::polar(1.0, -double(k) * h * double(j));
    acc /= double(n);
    u.set(k, acc);
    if (k > 0) u.set(-k, std::conj(acc));
  }
  return u;
}

inline FourierField derivative(const FourierField& u) {
  FourierField out(u.max_mode(), u.real_valued());
  for (int k = -u.max_mode(); k <= u.max_mode(); ++k)
    out.set(k, cdouble(0.0, double(k)) * u.at(k));
  return out;
}

/// Fourier coefficients of the pointwise product, exact for |k| <= K.
///
/// The padded grid has M >= 3K+1 points, so no aliased image of the
/// (2K)-wide true product lands inside the retained band; the result equals
/// the directly truncated convolution up to round-off. Nearly-empty inputs
/// (the two-mode family and its products) take a direct sparse-convolution
/// path instead, which computes the identical truncated convolution.
inline FourierField pseudospectral_product(const FourierField& u, const FourierField& v) {
  if (u.max_mode() != v.max_mode())
    throw precondition_error("pseudospectral_product: max_mode mismatch");
  const int K = u.max_mode();

  {
    thread_local std::vector<int> nzu, nzv;
    nzu.clear();
    nzv.clear();
    for (int k = -K; k <= K && nzu.size() <= 16; ++k)
      if (u.at(k) != cdouble(0.0, 0.0)) nzu.push_back(k);
    for (int k = -K; k <= K && nzv.size() <= 16; ++k)
      if (v.at(k) != cdouble(0.0, 0.0)) nzv.push_back(k);
    if (nzu.size() <= 16 && nzv.size() <= 16) {
      FourierField out(K, u.real_valued() && v.real_valued());
      for (int a : nzu)
        for (int b : nzv) {
          const int k = a + b;
          if (k < -K || k > K) continue;
          out.set(k, out.at(k) + u.at(a) * v.at(b));
        }
      return out;
    }
  }

  const std::size_t M = detail::next_pow2(std::size_t(3 * K + 2));

  thread_local std::vector<cdouble> a, b;
  a.assign(M, cdouble(0.0, 0.0));
  b.assign(M, cdouble(0.0, 0.0));
  for (int k = -K; k <= K; ++k) {
    const std::size_t idx = std::size_t((k + int(M)) % int(M));
    a[idx] = u.at(k);
    b[idx] = v.at(k);
  }
  detail::fft_pow2(a, true);
  detail::fft_pow2(b, true);
  // The inverse transform scales by 1/M, so the grid samples carry u/M and
  // v/M; one compensating factor of M makes the forward pass return the
  // product's coefficients directly.
  for (std::size_t j = 0; j < M; ++j) a[j] = a[j] * b[j] * double(M);
  detail::fft_pow2(a, false);

  FourierField out(K, u.real_valued() && v.real_valued());
  for (int k = -K; k <= K; ++k) out.set(k, a[std::size_t((k + int(M)) % int(M))]);
  return out;
}

/// Norm of H^s(T): (2pi)^{1/2} * l2 norm of (1+k^2)^{s/2} u_hat(k).
inline double sobolev_norm(const FourierField& u, double s) {
  double acc = 0.0;
  for (int k = -u.max_mode(); k <= u.max_mode(); ++k) {
    const double w = std::pow(1.0 + double(k) * double(k), s);
    acc += w * std::norm(u.at(k));
  }
  return std::sqrt(2.0 * 3.141592653589793238462643383279502884 * acc);
}

inline double l2_norm(const FourierField& u) { return sobolev_norm(u, 0.0); }

}  // namespace chenlee
