#pragma once

#include <cmath>
#include <vector>

#include "chenlee/errors.hpp"
#include "chenlee/fourier_field.hpp"

namespace chenlee {

/// Time-indexed family of Fourier fields on a shared (not necessarily
/// uniform) grid. times must be strictly increasing; times[0] == 0 holds
/// for everything the solver produces.
struct Trajectory {
  std::vector<double> times;
  std::vector<FourierField> fields;

  std::size_t size() const { return times.size(); }

  void validate() const {
    if (times.size() != fields.size())
      throw precondition_error("Trajectory: times/fields length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw precondition_error("Trajectory: times must be strictly increasing");
  }
};

/// sup over grid nodes with t > 0 of
///     ||u(t)||_{H^s} + t^{|s|/2} ||u(t)||_{L^2},    s < 0.
/// The t = 0 node contributes nothing; the weight vanishes there in the
/// continuum limit and the discrete sup mirrors that by skipping it.
inline double xts_norm(const Trajectory& u, double s) {
  if (!(s < 0.0))
    throw precondition_error("xts_norm: defined for s < 0 only; use solution_norm");
  u.validate();
  double sup = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = u.times[i];
    if (!(t > 0.0)) continue;
    const double val = sobolev_norm(u.fields[i], s) +
                       std::pow(t, -s / 2.0) * l2_norm(u.fields[i]);
    if (val > sup) sup = val;
  }
  return sup;
}

/// Norm of the solution space: the weighted sup above for s < 0, the plain
/// sup of ||u(t)||_{H^s} (all nodes, t = 0 included) for s >= 0.
inline double solution_norm(const Trajectory& u, double s) {
  if (s < 0.0) return xts_norm(u, s);
  u.validate();
  double sup = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double val = sobolev_norm(u.fields[i], s);
    if (val > sup) sup = val;
  }
  return sup;
}

}  // namespace chenlee
