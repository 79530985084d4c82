#pragma once

#include <cmath>
#include <string>

#include "dshock/errors.hpp"

namespace dshock {

/// A point (u, rho) of phase space: velocity and density. Density is never
/// negative; rho = 0 (vacuum) is admitted.
class State {
 public:
  State() = default;
  State(double u, double rho) : u_(u), rho_(rho) {
    if (!std::isfinite(u) || !std::isfinite(rho)) {
      throw invalid_input("State: non-finite component (u=" +
                          std::to_string(u) + ", rho=" + std::to_string(rho) +
                          ")");
    }
    if (rho < 0.0) {
      throw invalid_input("State: density must be >= 0, got rho=" +
                          std::to_string(rho));
    }
  }

  double u() const { return u_; }
  double rho() const { return rho_; }

  friend bool operator==(const State&, const State&) = default;

 private:
  double u_ = 0.0;
  double rho_ = 0.0;
};

/// Riemann initial data: `left` for x < 0, `right` for x > 0.
struct RiemannData {
  State left;
  State right;
};

}  // namespace dshock
