#pragma once

#include "chenlee/errors.hpp"

namespace chenlee {

/// Model coefficients: beta scales the dispersive term, eta the combined
/// instability/dissipation pair. Every decay estimate needs eta > 0;
/// beta = 0 (no dispersion) is allowed.
struct ModelParams {
  double beta = 1.0;
  double eta = 1.0;

  void validate() const {
    if (!(eta > 0.0)) throw precondition_error("ModelParams: eta must be > 0");
    if (!(beta >= 0.0)) throw precondition_error("ModelParams: beta must be >= 0");
  }
};

}  // namespace chenlee
