// Minimal library tour: march a random smooth field and watch the L2 norm
// decay at the rate the damping symbol dictates. Prints a small table;
// exit 0 iff the norm never increased.

#include <cstdio>

#include "chenlee/etd.hpp"
#include "chenlee/random_field.hpp"

using namespace chenlee;

int main() {
  RandomFieldSpec spec;
  spec.K = 64;
  spec.profile_exponent = 2.0;
  spec.seed = 7;

  duhamel::SolverConfig cfg;
  cfg.params = ModelParams{1.0, 1.0};
  cfg.s = 1.0;
  cfg.K = spec.K;
  cfg.T = 2.0;
  cfg.n_steps = 400;

  const FourierField phi = normalize_to(random_field(spec), cfg.s, 1.0);
  const Trajectory traj = duhamel::etd_march(phi, cfg);

  std::printf("%8s  %12s  %14s\n", "t", "l2 norm", "d/dt l2^2");
  bool monotone = true;
  for (std::size_t i = 0; i < traj.size(); i += 50) {
    std::printf("%8.3f  %12.8f  %14.6e\n", traj.times[i], l2_norm(traj.fields[i]),
                duhamel::energy_rate(traj.fields[i], cfg.params));
    if (i > 0 && l2_norm(traj.fields[i]) > l2_norm(traj.fields[i - 50]) * (1 + 1e-10))
      monotone = false;
  }
  std::printf("monotone decay: %s\n", monotone ? "yes" : "NO");
  return monotone ? 0 : 1;
}
