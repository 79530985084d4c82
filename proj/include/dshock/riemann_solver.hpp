#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dshock/errors.hpp"
#include "dshock/flux_model.hpp"
#include "dshock/numerics.hpp"
#include "dshock/state.hpp"
#include "dshock/wave_curves.hpp"

namespace dshock {

enum class CaseTag {
  two_shock,
  rarefaction_shock,
  shock_rarefaction,
  two_rarefaction_vacuum,
  constant
};

inline const char* to_string(CaseTag t) {
  switch (t) {
    case CaseTag::two_shock: return "TwoShock";
    case CaseTag::rarefaction_shock: return "RarefactionShock";
    case CaseTag::shock_rarefaction: return "ShockRarefaction";
    case CaseTag::two_rarefaction_vacuum: return "TwoRarefactionVacuum";
    case CaseTag::constant: return "Constant";
  }
  return "?";
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Similarity-variable intervals are half open, (xi_lo, xi_hi]; the leftmost
// segment starts at -inf and includes it.
struct ConstantSegment {
  State state;
  double xi_lo;
  double xi_hi;
};

struct ShockSegment {
  int family;
  double speed;
  State left;
  State right;
};

/// Centered fan on the rarefaction curve of `family` through `anchor`,
/// spanning log densities between `log_rho_lo` and `log_rho_hi`.
struct RarefactionSegment {
  int family;
  double xi_lo;
  double xi_hi;
  State anchor;
  double log_rho_lo;
  double log_rho_hi;
};

/// rho = 0, u = xi.
struct VacuumSegment {
  double xi_lo;
  double xi_hi;
};

using Segment =
    std::variant<ConstantSegment, ShockSegment, RarefactionSegment, VacuumSegment>;

struct IntermediateState {
  double u_star = 0.0;
  double rho_star = 0.0;
  double epsilon = 0.0;
  double log_rho_star = 0.0;  // meaningful when rho_star underflows
};

/// Velocities at the two ends of the vacuum region, u*(1) on the left and
/// u*(2) on the right.
struct VacuumEdges {
  double u_star1 = 0.0;
  double u_star2 = 0.0;
};

struct WaveFan {
  CaseTag tag = CaseTag::constant;
  RiemannData data;
  double epsilon = 0.0;
  std::vector<Segment> segments;
  std::optional<IntermediateState> intermediate;
  std::optional<VacuumEdges> vacuum;

  /// Shock segments in left-to-right order.
  std::vector<ShockSegment> shocks() const {
    std::vector<ShockSegment> out;
    for (const auto& s : segments) {
      if (const auto* sh = std::get_if<ShockSegment>(&s)) out.push_back(*sh);
    }
    return out;
  }
};

inline CaseTag classify(const RiemannData& data) {
  const double ul = data.left.u(), ur = data.right.u();
  if (ul > ur) return CaseTag::two_shock;
  if (ul < ur) return CaseTag::two_rarefaction_vacuum;
  if (data.left.rho() == data.right.rho()) return CaseTag::constant;
  return data.right.rho() < data.left.rho() ? CaseTag::rarefaction_shock
                                            : CaseTag::shock_rarefaction;
}

/// Density below which a fan state is reported as vacuum.
inline const double kVacuumRho = std::numeric_limits<double>::min();
inline const double kLogVacuumRho = std::log(kVacuumRho);

namespace detail {

inline void require_positive_densities(const RiemannData& d, const char* who) {
  if (!(d.left.rho() > 0.0) || !(d.right.rho() > 0.0)) {
    throw invalid_input(std::string(who) + ": both densities must be > 0");
  }
}

inline double speed_of(const FluxModel& m, int family, double u, double rho) {
  const auto c = characteristic_speeds(m, State(u, rho));
  return family == 1 ? c.lambda1 : c.lambda2;
}

inline double fan_u(const FluxModel& m, const RarefactionSegment& r, double sigma) {
  return rarefaction_u_of_log_rho(m, r.family, r.anchor, sigma);
}

inline double fan_speed(const FluxModel& m, const RarefactionSegment& r, double sigma) {
  return speed_of(m, r.family, fan_u(m, r, sigma), std::exp(sigma));
}

inline RarefactionSegment make_fan(const FluxModel& m, int family, const State& anchor,
                                   double sigma_a, double sigma_b) {
  RarefactionSegment r{family, 0.0, 0.0, anchor, std::min(sigma_a, sigma_b),
                       std::max(sigma_a, sigma_b)};
  const double xa = fan_speed(m, r, r.log_rho_lo), xb = fan_speed(m, r, r.log_rho_hi);
  r.xi_lo = std::min(xa, xb);
  r.xi_hi = std::max(xa, xb);
  return r;
}

}  // namespace detail

/// Two-shock solution for u_l > u_r. The intermediate velocity is the root of
/// rho1(u) - rho2(u) on [u_r, u_l], where rho1 is the 1-shock locus from the
/// left state and rho2 the 2-shock locus into the right state.
inline WaveFan solve_two_shock(const FluxModel& m, const RiemannData& data,
                               IntermediateState* out = nullptr) {
  detail::require_positive_densities(data, "solve_two_shock");
  const State& L = data.left;
  const State& R = data.right;
  if (!(L.u() > R.u())) throw invalid_input("solve_two_shock: needs u_l > u_r");
  auto h = [&](double u) { return shock1_rho_given_u(m, L, u) - shock2_rho_given_u(m, R, u); };
  const double h_left = h(L.u()), h_right = h(R.u());
  if (!(h_left < 0.0) || !(h_right > 0.0)) {
    throw no_intersection_error(
        "solve_two_shock: shock curves do not cross for eps=" +
        std::to_string(m.epsilon()) + " (rho1-rho2 at u_l: " + std::to_string(h_left) +
        ", at u_r: " + std::to_string(h_right) + "; expected - and +)");
  }
  const double u_tol = 4.0 * kMachineEps * std::max({1.0, std::abs(L.u()), std::abs(R.u())});
  const double u_star = bisect(h, R.u(), L.u(), u_tol, kInf).x;
  const double rho_star = shock1_rho_given_u(m, L, u_star);
  const State M(u_star, rho_star);
  const double s1 = shock_speed(m, 1, L, M);
  const double s2 = shock_speed(m, 2, M, R);

  WaveFan fan;
  fan.tag = CaseTag::two_shock;
  fan.data = data;
  fan.epsilon = m.epsilon();
  fan.segments = {ConstantSegment{L, -kInf, s1}, ShockSegment{1, s1, L, M},
                  ConstantSegment{M, s1, s2}, ShockSegment{2, s2, M, R},
                  ConstantSegment{R, s2, kInf}};
  fan.intermediate = IntermediateState{u_star, rho_star, m.epsilon(), std::log(rho_star)};
  if (out) *out = *fan.intermediate;
  return fan;
}

/// u_l = u_r: constant, rarefaction-then-shock (rho_r < rho_l) or
/// shock-then-rarefaction (rho_l < rho_r).
inline WaveFan solve_equal_u(const FluxModel& m, const RiemannData& data) {
  const State& L = data.left;
  const State& R = data.right;
  if (L.u() != R.u()) throw invalid_input("solve_equal_u: needs u_l = u_r");
  WaveFan fan;
  fan.data = data;
  fan.epsilon = m.epsilon();
  if (L.rho() == R.rho()) {
    fan.tag = CaseTag::constant;
    fan.segments = {ConstantSegment{L, -kInf, kInf}};
    return fan;
  }
  detail::require_positive_densities(data, "solve_equal_u");
  const double eps = m.epsilon();
  if (R.rho() < L.rho()) {
    auto psi = [&](double rho) {
      return rarefaction_u_of_rho(m, 1, L, rho) -
             (R.u() + shock_locus_du(m, 2, R.rho(), rho));
    };
    const double rho_star = bisect(psi, R.rho(), L.rho(), 0.0, 0.0).x;
    const State M(rarefaction_u_of_rho(m, 1, L, rho_star), rho_star);
    const auto fan1 = detail::make_fan(m, 1, L, std::log(L.rho()), std::log(rho_star));
    const double s2 = shock_speed(m, 2, M, R);
    fan.tag = CaseTag::rarefaction_shock;
    fan.segments = {ConstantSegment{L, -kInf, fan1.xi_lo}, fan1,
                    ConstantSegment{M, fan1.xi_hi, s2}, ShockSegment{2, s2, M, R},
                    ConstantSegment{R, s2, kInf}};
    fan.intermediate = IntermediateState{M.u(), rho_star, eps, std::log(rho_star)};
  } else {
    auto psi = [&](double rho) {
      return (L.u() + shock_locus_du(m, 1, L.rho(), rho)) -
             rarefaction_u_of_rho(m, 2, R, rho);
    };
    const double rho_star = bisect(psi, L.rho(), R.rho(), 0.0, 0.0).x;
    const State M(L.u() + shock_locus_du(m, 1, L.rho(), rho_star), rho_star);
    const double s1 = shock_speed(m, 1, L, M);
    const auto fan2 = detail::make_fan(m, 2, R, std::log(rho_star), std::log(R.rho()));
    fan.tag = CaseTag::shock_rarefaction;
    fan.segments = {ConstantSegment{L, -kInf, s1}, ShockSegment{1, s1, L, M},
                    ConstantSegment{M, s1, fan2.xi_lo}, fan2,
                    ConstantSegment{R, fan2.xi_hi, kInf}};
    fan.intermediate = IntermediateState{M.u(), rho_star, eps, std::log(rho_star)};
  }
  return fan;
}

/// u_l < u_r: two rarefactions meeting at a state of very small density, or
/// at a true vacuum when the curves reach rho = 0 without crossing. Fan
/// states with rho below the smallest normal double are reported as vacuum.
inline WaveFan solve_two_rarefaction(const FluxModel& m, const RiemannData& data) {
  detail::require_positive_densities(data, "solve_two_rarefaction");
  const State& L = data.left;
  const State& R = data.right;
  if (!(L.u() < R.u())) throw invalid_input("solve_two_rarefaction: needs u_l < u_r");

  auto phi = [&](double sigma) {
    return rarefaction_u_of_log_rho(m, 1, L, sigma) -
           rarefaction_u_of_log_rho(m, 2, R, sigma);
  };
  const double sigma_top = std::log(std::min(L.rho(), R.rho()));
  const double phi_top = phi(sigma_top);
  if (phi_top >= 0.0) {
    throw no_intersection_error(
        "solve_two_rarefaction: rarefaction curves overlap for eps=" +
        std::to_string(m.epsilon()) + " (u1-u2 at rho=" +
        std::to_string(std::exp(sigma_top)) + " is " + std::to_string(phi_top) +
        ", expected < 0)");
  }

  WaveFan fan;
  fan.tag = CaseTag::two_rarefaction_vacuum;
  fan.data = data;
  fan.epsilon = m.epsilon();

  // Below this log density exp() returns 0 and both curves are flat in u
  // except for the logarithmic term of the linear-g family-2 curve.
  constexpr double kSigmaZero = -746.0;
  const bool linear = m.g_kind() == GKind::linear;
  const bool true_vacuum = !linear && rarefaction_u_of_rho(m, 1, L, 0.0) <
                                          rarefaction_u_of_rho(m, 2, R, 0.0);
  if (true_vacuum) {
    const double u1 = rarefaction_u_of_rho(m, 1, L, 0.0);
    const double u2 = rarefaction_u_of_rho(m, 2, R, 0.0);
    const auto fan1 = detail::make_fan(m, 1, L, std::log(L.rho()), kSigmaZero);
    const auto fan2 = detail::make_fan(m, 2, R, kSigmaZero, std::log(R.rho()));
    fan.segments = {ConstantSegment{L, -kInf, fan1.xi_lo}, fan1,
                    VacuumSegment{fan1.xi_hi, fan2.xi_lo}, fan2,
                    ConstantSegment{R, fan2.xi_hi, kInf}};
    fan.vacuum = VacuumEdges{u1, u2};
    fan.intermediate = IntermediateState{u1, 0.0, m.epsilon(), -kInf};
    return fan;
  }

  double lo = sigma_top - 1.0;
  while (phi(lo) < 0.0) {
    const double width = sigma_top - lo;
    lo = sigma_top - 2.0 * width;
    if (lo < -1e300) {
      throw no_intersection_error("solve_two_rarefaction: no crossing found");
    }
  }
  const double sigma_star =
      bisect(phi, lo, sigma_top, 4.0 * kMachineEps * std::max(1.0, -lo), kInf).x;
  const double u_star = rarefaction_u_of_log_rho(m, 1, L, sigma_star);
  const double rho_star = std::exp(sigma_star);
  const State M(u_star, rho_star);
  fan.intermediate = IntermediateState{u_star, rho_star, m.epsilon(), sigma_star};

  const auto fan1 = detail::make_fan(m, 1, L, std::log(L.rho()), sigma_star);
  const auto cm = characteristic_speeds(m, M);
  fan.segments = {ConstantSegment{L, -kInf, fan1.xi_lo}, fan1,
                  ConstantSegment{M, fan1.xi_hi, cm.lambda2}};
  if (sigma_star < kLogVacuumRho) {
    const auto fan2 = detail::make_fan(m, 2, R, kLogVacuumRho, std::log(R.rho()));
    fan.segments.push_back(VacuumSegment{cm.lambda2, fan2.xi_lo});
    fan.segments.push_back(fan2);
    fan.segments.push_back(ConstantSegment{R, fan2.xi_hi, kInf});
    fan.vacuum = VacuumEdges{u_star, fan2.xi_lo};
  } else {
    const auto fan2 = detail::make_fan(m, 2, R, sigma_star, std::log(R.rho()));
    fan.segments.push_back(fan2);
    fan.segments.push_back(ConstantSegment{R, fan2.xi_hi, kInf});
    fan.vacuum = VacuumEdges{u_star, u_star};
  }
  return fan;
}

/// Dispatches on classify().
inline WaveFan solve(const FluxModel& m, const RiemannData& data) {
  switch (classify(data)) {
    case CaseTag::two_shock: return solve_two_shock(m, data);
    case CaseTag::two_rarefaction_vacuum: return solve_two_rarefaction(m, data);
    default: return solve_equal_u(m, data);
  }
}

namespace detail {

inline State sample_fan(const FluxModel& m, const RarefactionSegment& r, double xi) {
  auto g = [&](double sigma) { return fan_speed(m, r, sigma) - xi; };
  double lo = r.log_rho_lo, hi = r.log_rho_hi;
  // Keep the search inside the range where exp() is representable.
  lo = std::max(lo, -745.0);
  const double sigma =
      bisect(g, lo, hi, 4.0 * kMachineEps * std::max({1.0, std::abs(lo), std::abs(hi)}), kInf).x;
  const double rho = std::exp(sigma);
  return State(fan_u(m, r, sigma), rho < kVacuumRho ? 0.0 : rho);
}

}  // namespace detail

/// Solution at (x, t), t > 0. At a wave edge the left limit is returned.
inline State sample(const WaveFan& fan, const FluxModel& m, double x, double t) {
  if (!(t > 0.0)) throw invalid_input("sample: t must be > 0");
  if (m.epsilon() != fan.epsilon) {
    throw invalid_input("sample: model epsilon differs from the fan's");
  }
  const double xi = x / t;
  for (const auto& seg : fan.segments) {
    if (const auto* c = std::get_if<ConstantSegment>(&seg)) {
      if (xi <= c->xi_hi) return c->state;
    } else if (const auto* r = std::get_if<RarefactionSegment>(&seg)) {
      if (xi <= r->xi_hi) return detail::sample_fan(m, *r, xi);
    } else if (const auto* v = std::get_if<VacuumSegment>(&seg)) {
      if (xi <= v->xi_hi) return State(xi, 0.0);
    }
  }
  return fan.data.right;
}

}  // namespace dshock
