// Solve one Riemann problem per case and print the solution along x at t = 1.
#include <cstdio>

#include "dshock/dshock.hpp"

int main() {
  using namespace dshock;
  const FluxModel m = FluxModel::brio(1e-2);
  const RiemannData cases[] = {
      {State(1.0, 1.0), State(-1.0, 1.0)},
      {State(0.0, 2.0), State(0.0, 1.0)},
      {State(0.0, 1.0), State(0.0, 2.0)},
      {State(-1.0, 1.0), State(1.0, 1.0)},
  };
  for (const auto& d : cases) {
    const WaveFan fan = solve(m, d);
    std::printf("%s", to_string(fan.tag));
    if (fan.intermediate) {
      std::printf("  u* = %.6f  rho* = %.6e", fan.intermediate->u_star,
                  fan.intermediate->rho_star);
    }
    std::printf("\n");
    for (int i = 0; i <= 8; ++i) {
      const double x = -1.2 + 0.3 * i;
      const State s = sample(fan, m, x, 1.0);
      std::printf("  x = %5.2f  u = %10.6f  rho = %.6e\n", x, s.u(), s.rho());
    }
  }
}
