// Lax-Friedrichs run against the exact cell averages; writes both profiles.
#include <cstdio>
#include <fstream>

#include "dshock/dshock.hpp"

int main(int argc, char** argv) {
  using namespace dshock;
  const FluxModel m = FluxModel::brio(0.05);
  const RiemannData data{State(1.0, 1.0), State(-1.0, 1.0)};
  const Grid1D g(-1.0, 1.0, 800, 0.9);
  const double t = 0.5;

  const FieldSnapshot num = run(m, data, g, t);
  const FieldSnapshot exact = exact_cell_averages(solve(m, data), m, g, t);
  std::printf("L1(rho) = %.3e  L1(u) = %.3e\n", l1_distance(num.rho, exact.rho, g.dx()),
              l1_distance(num.u, exact.u, g.dx()));

  if (argc > 1) {
    std::ofstream out(argv[1]);
    out << "x,u,rho,u_exact,rho_exact\n";
    for (std::size_t i = 0; i < g.n_cells; ++i) {
      out << g.center(i) << ',' << num.u[i] << ',' << num.rho[i] << ',' << exact.u[i] << ','
          << exact.rho[i] << '\n';
    }
  }
}
