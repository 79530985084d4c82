// Two-shock solutions shrinking onto a delta shock as eps decreases.
#include <cstdio>

#include "dshock/dshock.hpp"

int main() {
  using namespace dshock;
  const RiemannData data{State(2.0, 1.0), State(0.0, 3.0)};
  const SweepResult r = sweep(FluxModel::brio(1.0), data, default_eps_list());

  std::printf("%10s %14s %14s %12s %12s %12s\n", "eps", "u*", "rho*", "s1", "s2", "mass rate");
  for (const auto& x : r.records) {
    std::printf("%10.1e %14.8f %14.6e %12.8f %12.8f %12.8f\n", x.epsilon, x.u_star, x.rho_star,
                x.s1, x.s2, x.weight_estimate);
  }

  const auto lim = delta_shock_limit(data);
  std::printf("\nlimit: x = %g t, weight %g t, l = %g\n", lim.c_slope, lim.weight_slope, lim.l);
  const auto ex = extrapolate_limit(r.records, data);
  for (const auto& f : ex.fits) {
    std::printf("  %-16s -> %.8f (order %.2f)%s\n", f.name.c_str(), f.extrapolated, f.order,
                f.converged ? "" : "  not converged");
  }
}
