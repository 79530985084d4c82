#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "dshock/errors.hpp"
#include "dshock/flux_model.hpp"
#include "dshock/numerics.hpp"
#include "dshock/state.hpp"

namespace dshock {

struct ShockLocusPoint {
  State left;
  State right;
  double speed = 0.0;
  int family = 1;
};

struct LocusOptions {
  double rho_cap = 1e12;  // upper limit of the expanding density bracket
};

namespace detail {

inline void check_family(int family) {
  if (family != 1 && family != 2) {
    throw invalid_input("family must be 1 or 2, got " + std::to_string(family));
  }
}

// Square root shared by the locus and the speed formulas.
inline double locus_root(const FluxModel& m, double a, double b) {
  const double eps = m.epsilon();
  const double qg = m.g_slope(a, b);
  return std::sqrt(eps * eps * qg * qg + 2.0 * eps * (a + b) * m.f_slope(a, b));
}

}  // namespace detail

/// Velocity jump u - u_anchor along the admissible shock locus of `family`
/// through an anchor of density `rho_anchor`, as a function of the density
/// `rho` at the other end. Symmetric in the roles of the two states, so it
/// serves both the forward and the reversed orientation.
inline double shock_locus_du(const FluxModel& m, int family, double rho_anchor,
                             double rho) {
  detail::check_family(family);
  if (rho == rho_anchor) return 0.0;
  const double sum = rho + rho_anchor;
  if (!(sum > 0.0)) return 0.0;
  const double qg = m.g_slope(rho, rho_anchor);
  const double root = detail::locus_root(m, rho, rho_anchor);
  const double branch = family == 1 ? -root : root;
  return (rho - rho_anchor) / sum * (-m.epsilon() * qg + branch);
}

namespace detail {

inline double solve_locus(const FluxModel& m, int family, const State& anchor,
                          double u, const LocusOptions& opt, const char* who) {
  if (!(anchor.rho() > 0.0)) {
    throw invalid_input(std::string(who) + ": anchor density must be > 0");
  }
  if (!std::isfinite(u)) throw invalid_input(std::string(who) + ": u must be finite");
  const double target = u - anchor.u();
  if (target == 0.0) return anchor.rho();
  const double rb = anchor.rho();
  auto F = [&](double rho) { return shock_locus_du(m, family, rb, rho) - target; };
  // Family 1 decreases in rho, family 2 increases; the unbounded side lies
  // above the anchor, the bounded side between 0 and the anchor.
  const bool upward = (family == 1) == (target < 0.0);
  double lo, hi;
  if (upward) {
    lo = rb;
    hi = 2.0 * rb;
    while ((F(hi) < 0.0) != (family == 1)) {
      lo = hi;
      hi *= 2.0;
      if (hi > opt.rho_cap) {
        throw bracket_error(std::string(who) + ": no sign change below rho_cap=" +
                            std::to_string(opt.rho_cap) + " (target du=" +
                            std::to_string(target) + ")");
      }
    }
  } else {
    lo = 0.0;
    hi = rb;
    const double f0 = F(0.0);
    if (f0 != 0.0 && (f0 < 0.0) == (family == 1)) {
      throw domain_error(std::string(who) + ": the locus state would need rho < 0 "
                         "(u=" + std::to_string(u) + " beyond the rho=0 end at u=" +
                         std::to_string(anchor.u() + f0 + target) + ")");
    }
  }
  const RootResult r = bisect(F, lo, hi, 0.0, 0.0);
  return r.x;
}

}  // namespace detail

/// Density on the admissible 1-shock locus through `anchor` at velocity u.
/// For u <= anchor.u the result is >= anchor.rho and decreasing in u.
inline double shock1_rho_given_u(const FluxModel& m, const State& anchor, double u,
                                 const LocusOptions& opt = {}) {
  return detail::solve_locus(m, 1, anchor, u, opt, "shock1_rho_given_u");
}

/// Density on the admissible 2-shock locus through `anchor` at velocity u,
/// increasing in u. Used with the anchor as the right state for u > anchor.u.
inline double shock2_rho_given_u(const FluxModel& m, const State& anchor, double u,
                                 const LocusOptions& opt = {}) {
  return detail::solve_locus(m, 2, anchor, u, opt, "shock2_rho_given_u");
}

/// Rankine-Hugoniot residual s[U] - [F(U)] with [h] = h(left) - h(right).
inline std::pair<double, double> rh_residual(const FluxModel& m, const State& left,
                                             const State& right, double s) {
  const Vector2 fl = m.flux(left), fr = m.flux(right);
  return {s * (left.u() - right.u()) - (fl[0] - fr[0]),
          s * (left.rho() - right.rho()) - (fl[1] - fr[1])};
}

/// Shock speed of a pair on the admissible locus of `family`. The closed form
/// is cross-checked against the speed from the density equation; disagreement
/// beyond 1e-8 means the pair is off the locus.
inline double shock_speed(const FluxModel& m, int family, const State& left,
                          const State& right) {
  detail::check_family(family);
  const double rl = left.rho(), rr = right.rho();
  if (rl == rr) {
    throw off_locus_error("shock_speed: equal densities (rho=" + std::to_string(rl) +
                          ") do not define a shock");
  }
  const double eps = m.epsilon();
  const double qg = m.g_slope(rl, rr);
  const double root = detail::locus_root(m, rl, rr);
  const double s = 0.5 * (left.u() + right.u()) + 0.5 * eps * qg +
                   (family == 1 ? -0.5 : 0.5) * root;
  const double ratio = (rr * right.u() - rl * left.u()) / (rr - rl);
  const double s_mass = ratio + eps * qg;
  const double scale = std::max({1.0, std::abs(s), std::abs(ratio), std::abs(eps * qg)});
  if (std::abs(s - s_mass) > 1e-8 * scale) {
    throw off_locus_error("shock_speed: pair is off the " + std::to_string(family) +
                          "-shock locus (speed " + std::to_string(s) +
                          " vs mass-balance speed " + std::to_string(s_mass) + ")");
  }
  return s;
}

/// Lax inequalities for `family` with tolerance 1e-12 max(1, |s|).
/// Family 1: s < lambda1(left), lambda1(right) < s < lambda2(right).
/// Family 2: s > lambda2(right), lambda1(left) < s < lambda2(left).
inline bool lax_admissible(const FluxModel& m, int family, const State& left,
                           const State& right, double s) {
  detail::check_family(family);
  const double tol = 1e-12 * std::max(1.0, std::abs(s));
  auto lt = [tol](double a, double b) { return b - a > tol; };
  const auto cl = characteristic_speeds(m, left);
  const auto cr = characteristic_speeds(m, right);
  if (family == 1) return lt(s, cl.lambda1) && lt(cr.lambda1, s) && lt(s, cr.lambda2);
  return lt(cr.lambda2, s) && lt(cl.lambda1, s) && lt(s, cl.lambda2);
}

/// Builds the locus point anchored at `left` (family 1) or reached from
/// `left` (family 2) with velocity u on the other side.
inline ShockLocusPoint shock_point(const FluxModel& m, int family, const State& left,
                                   double u_right, const LocusOptions& opt = {}) {
  const double rho = family == 1 ? shock1_rho_given_u(m, left, u_right, opt)
                                 : shock2_rho_given_u(m, left, u_right, opt);
  const State right(u_right, rho);
  return {left, right, shock_speed(m, family, left, right), family};
}

/// Closed-form shock curves for f = rho^2/2, g = -rho^2:
/// u - u_a = (rho - rho_a) (eps -/+ sqrt(eps^2 + eps)).
inline double quadratic_g_shock_loci(const State& anchor, double epsilon, double u,
                                     int family) {
  detail::check_family(family);
  if (!(epsilon > 0.0)) throw invalid_input("quadratic_g_shock_loci: epsilon must be > 0");
  if (u > anchor.u()) {
    throw invalid_input("quadratic_g_shock_loci: needs u <= anchor.u");
  }
  const double root = std::sqrt(epsilon * epsilon + epsilon);
  const double slope = family == 1 ? epsilon - root : epsilon + root;
  const double rho = anchor.rho() + (u - anchor.u()) / slope;
  if (rho < 0.0) {
    throw domain_error("quadratic_g_shock_loci: locus leaves rho >= 0 at u=" +
                       std::to_string(u));
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Rarefaction curves.
//
// du/drho = (a -/+ sqrt(a^2 + eps rho f')) / rho with a = -eps g'/2. Family 1
// is -k(rho) with k = eps f' / (a + sqrt(a^2 + eps rho f')), bounded at 0.
// Family 2 is 2a/rho + k; the 2a/rho part integrates in closed form.

namespace detail {

inline double rarefaction_kernel(const FluxModel& m, double xi) {
  const double eps = m.epsilon();
  const double a = -0.5 * eps * m.dg(xi);
  const double fp = m.df(xi);
  const double den = a + std::sqrt(a * a + eps * xi * fp);
  if (den == 0.0) return 0.0;  // rho = 0 with g'(0) = 0
  return eps * fp / den;
}

inline double kernel_integral(const FluxModel& m, double from, double to) {
  if (from == to) return 0.0;
  return integrate([&](double xi) { return rarefaction_kernel(m, xi); }, from, to,
                   1e-12, 15);
}

// Integral of 2a(xi)/xi = -eps g'(xi)/xi from the anchor density to
// exp(log_rho).
inline double family2_singular_part(const FluxModel& m, double rho_anchor,
                                    double log_rho) {
  const double eps = m.epsilon();
  if (m.g_kind() == GKind::linear) return eps * (log_rho - std::log(rho_anchor));
  return 2.0 * eps * (std::exp(log_rho) - rho_anchor);
}

}  // namespace detail

/// Velocity on the rarefaction curve of `family` through `anchor`, at density
/// rho, by adaptive quadrature. Family 2 at rho = 0 diverges for linear g
/// (the curve has u -> -infinity) and raises domain_error.
inline double rarefaction_u_of_rho(const FluxModel& m, int family, const State& anchor,
                                   double rho) {
  detail::check_family(family);
  if (!(anchor.rho() > 0.0)) {
    throw invalid_input("rarefaction_u_of_rho: anchor density must be > 0");
  }
  if (!(rho >= 0.0)) throw invalid_input("rarefaction_u_of_rho: rho must be >= 0");
  if (rho == anchor.rho()) return anchor.u();
  const double k = detail::kernel_integral(m, anchor.rho(), rho);
  if (family == 1) return anchor.u() - k;
  if (rho == 0.0) {
    if (m.g_kind() == GKind::linear) {
      throw domain_error("rarefaction_u_of_rho: family-2 curve diverges at rho = 0 "
                         "for linear g; use rarefaction_u_of_log_rho");
    }
    return anchor.u() - 2.0 * m.epsilon() * anchor.rho() + k;
  }
  return anchor.u() + detail::family2_singular_part(m, anchor.rho(), std::log(rho)) + k;
}

/// Same curve parameterized by log density, valid down to densities that
/// underflow a double.
inline double rarefaction_u_of_log_rho(const FluxModel& m, int family,
                                       const State& anchor, double log_rho) {
  detail::check_family(family);
  if (!(anchor.rho() > 0.0)) {
    throw invalid_input("rarefaction_u_of_log_rho: anchor density must be > 0");
  }
  if (std::isnan(log_rho)) throw invalid_input("rarefaction_u_of_log_rho: NaN");
  const double rho = std::exp(log_rho);
  const double k = detail::kernel_integral(m, anchor.rho(), rho);
  if (family == 1) return anchor.u() - k;
  return anchor.u() + detail::family2_singular_part(m, anchor.rho(), log_rho) + k;
}

}  // namespace dshock
