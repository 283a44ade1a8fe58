#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "chenlee/errors.hpp"

namespace chenlee {

struct LoglogFit {
  double slope = 0.0;
  double intercept = 0.0;
  // Two standard errors of the slope; 0 when the fit is exact or has no
  // residual degrees of freedom.
  double half_width = 0.0;
};

/// Least squares of ln y against ln x. Inputs must be positive and at
/// least two points long.
inline LoglogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2)
    throw precondition_error("fit_loglog: need matching arrays with at least 2 points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw precondition_error("fit_loglog: inputs must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw precondition_error("fit_loglog: abscissas are all equal");

  LoglogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ssr += r * r;
    }
    fit.half_width = 2.0 * std::sqrt(ssr / double(n - 2) / sxx);
  }
  return fit;
}

}  // namespace chenlee
