// The two-mode counterexample in action: below s = -1 the H^s norm of the
// second iterate grows like N^{-2(s+1)} even though the data shrinks.

#include <cstdio>
#include <vector>

#include "chenlee/illposed.hpp"

using namespace chenlee;

int main() {
  const ModelParams p{1.0, 1.0};
  const std::vector<int> Ns = {16, 32, 64, 128, 256, 512, 1024};

  for (double s : {-1.5, 0.0}) {
    const auto rep = illposed::inflation_scan(s, p, 1.0, Ns);
    std::printf("s = %g (expected slope %+.2f, fitted %+.4f)\n", s, rep.expected_slope,
                rep.fitted_slope);
    for (std::size_t i = 0; i < rep.Ns.size(); ++i)
      std::printf("  N = %5d   ||A2||_{H^s} = %12.6g   mode-1 share = %.3f\n", rep.Ns[i],
                  rep.second_iterate_norms[i], rep.mode1_fractions[i]);
  }
  return 0;
}
