#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "dshock/errors.hpp"
#include "dshock/limit_analysis.hpp"
#include "dshock/numerics.hpp"
#include "dshock/state.hpp"

namespace dshock {

/// Smooth compactly supported test function on the closed upper half plane.
template <class T>
concept TestFunction = requires(const T& phi, double x, double t) {
  { phi.value(x, t) } -> std::convertible_to<double>;
  { phi.dx(x, t) } -> std::convertible_to<double>;
  { phi.dt(x, t) } -> std::convertible_to<double>;
  { phi.t_range() } -> std::convertible_to<std::pair<double, double>>;
  { phi.x_range(t) } -> std::convertible_to<std::pair<double, double>>;
  { phi.c1_norm() } -> std::convertible_to<double>;
};

/// exp(-1/(1 - r^2)) with r^2 = ((x - x0)/rx)^2 + ((t - t0)/rt)^2.
class Bump {
 public:
  Bump(double x0, double t0, double rx, double rt) : x0_(x0), t0_(t0), rx_(rx), rt_(rt) {
    if (!(rx > 0.0) || !(rt > 0.0)) throw invalid_input("Bump: radii must be > 0");
    if (!(t0 + rt > 0.0)) throw invalid_input("Bump: support lies below t = 0");
  }

  double x0() const { return x0_; }
  double t0() const { return t0_; }
  double rx() const { return rx_; }
  double rt() const { return rt_; }

  double value(double x, double t) const {
    const double s = r2(x, t);
    return s < 1.0 ? std::exp(-1.0 / (1.0 - s)) : 0.0;
  }
  double dx(double x, double t) const {
    const double s = r2(x, t);
    if (!(s < 1.0)) return 0.0;
    const double w = 1.0 - s;
    return -std::exp(-1.0 / w) * 2.0 * (x - x0_) / (rx_ * rx_ * w * w);
  }
  double dt(double x, double t) const {
    const double s = r2(x, t);
    if (!(s < 1.0)) return 0.0;
    const double w = 1.0 - s;
    return -std::exp(-1.0 / w) * 2.0 * (t - t0_) / (rt_ * rt_ * w * w);
  }

  std::pair<double, double> t_range() const { return {std::max(0.0, t0_ - rt_), t0_ + rt_}; }
  std::pair<double, double> x_range(double t) const {
    const double z = (t - t0_) / rt_;
    const double half = rx_ * std::sqrt(std::max(0.0, 1.0 - z * z));
    return {x0_ - half, x0_ + half};
  }

  /// sup|phi| + sup|phi_x| + sup|phi_t|.
  double c1_norm() const {
    // sup over s in (0,1) of exp(-1/(1-s^2)) 2s/(1-s^2)^2, scaled by 1/r.
    static const double profile = [] {
      double best = 0.0;
      for (int i = 1; i < 20000; ++i) {
        const double s = i / 20000.0, w = 1.0 - s * s;
        best = std::max(best, std::exp(-1.0 / w) * 2.0 * s / (w * w));
      }
      return best;
    }();
    return std::exp(-1.0) + profile / rx_ + profile / rt_;
  }

  Bump shifted(double dx) const { return Bump(x0_ + dx, t0_, rx_, rt_); }

 private:
  double r2(double x, double t) const {
    const double a = (x - x0_) / rx_, b = (t - t0_) / rt_;
    return a * a + b * b;
  }
  double x0_, t0_, rx_, rt_;
};

/// Linear combination of bumps.
class BumpSum {
 public:
  void add(double coeff, Bump b) { terms_.emplace_back(coeff, b); }

  double value(double x, double t) const { return sum([&](const Bump& b) { return b.value(x, t); }); }
  double dx(double x, double t) const { return sum([&](const Bump& b) { return b.dx(x, t); }); }
  double dt(double x, double t) const { return sum([&](const Bump& b) { return b.dt(x, t); }); }

  std::pair<double, double> t_range() const {
    std::pair<double, double> r{kInf, -kInf};
    for (const auto& [c, b] : terms_) {
      const auto s = b.t_range();
      r = {std::min(r.first, s.first), std::max(r.second, s.second)};
    }
    return r;
  }
  std::pair<double, double> x_range(double t) const {
    std::pair<double, double> r{kInf, -kInf};
    for (const auto& [c, b] : terms_) {
      const auto s = b.x_range(t);
      if (s.first < s.second) r = {std::min(r.first, s.first), std::max(r.second, s.second)};
    }
    if (r.first > r.second) return {0.0, 0.0};
    return r;
  }
  double c1_norm() const {
    double n = 0.0;
    for (const auto& [c, b] : terms_) n += std::abs(c) * b.c1_norm();
    return n;
  }

 private:
  template <class F>
  double sum(F&& f) const {
    double s = 0.0;
    for (const auto& [c, b] : terms_) s += c * f(b);
    return s;
  }
  std::vector<std::pair<double, Bump>> terms_;
};

// ---------------------------------------------------------------------------

/// One sector xi_lo < x/t < xi_hi of a self-similar limit solution: constant
/// u, or u = x/t when `u_is_xi`; constant absolutely continuous density.
struct SolutionPiece {
  double xi_lo;
  double xi_hi;
  double u;
  double rho;
  bool u_is_xi = false;
};

/// Density line mass weight_slope * t carried along x = c_slope t, moving with
/// velocity u_on_line.
struct SingularPart {
  double c_slope;
  double weight_slope;
  double u_on_line;
};

struct MeasureSolution {
  std::vector<SolutionPiece> pieces;  // ordered, contiguous, covering the real line
  std::optional<SingularPart> singular;
};

inline MeasureSolution to_measure_solution(const LimitObject& lim) {
  MeasureSolution s;
  if (const auto* d = std::get_if<DeltaShockLimit>(&lim)) {
    s.pieces = {{-kInf, d->c_slope, d->u_left, d->rho_left},
                {d->c_slope, kInf, d->u_right, d->rho_right}};
    s.singular = SingularPart{d->c_slope, d->weight_slope, d->u_on_line};
  } else if (const auto* c = std::get_if<ContactLimit>(&lim)) {
    s.pieces = {{-kInf, c->line_slope, c->u, c->rho_left},
                {c->line_slope, kInf, c->u, c->rho_right}};
  } else {
    const auto& v = std::get<VacuumLimit>(lim);
    s.pieces = {{-kInf, v.u_left, v.u_left, v.rho_left},
                {v.u_left, v.u_right, 0.0, 0.0, true},
                {v.u_right, kInf, v.u_right, v.rho_right}};
  }
  return s;
}

struct WeakResidualOptions {
  double quad_tol = 1e-10;
  unsigned max_depth = 10;
};

namespace detail {

// Integral over the support of phi of integrand(piece, x, t), split along the
// lines x = xi t that bound the pieces.
template <TestFunction Phi, class Integrand>
double sector_integral(const MeasureSolution& sol, const Phi& phi, Integrand&& integrand,
                       const WeakResidualOptions& opt) {
  const auto [t_lo, t_hi] = phi.t_range();
  auto inner = [&](double t) {
    if (!(t > 0.0)) return 0.0;
    const auto [x_lo, x_hi] = phi.x_range(t);
    if (!(x_hi > x_lo)) return 0.0;
    double total = 0.0;
    for (const auto& p : sol.pieces) {
      const double a = std::max(x_lo, p.xi_lo * t), b = std::min(x_hi, p.xi_hi * t);
      if (!(b > a)) continue;
      total += integrate([&](double x) { return integrand(p, x, t); }, a, b, opt.quad_tol,
                         opt.max_depth);
    }
    return total;
  };
  return integrate(inner, t_lo, t_hi, opt.quad_tol, opt.max_depth);
}

// Integral over x of h(x) phi(x, 0) with h = left for x < 0, right for x > 0.
template <TestFunction Phi>
double initial_term(const Phi& phi, double left, double right, const WeakResidualOptions& opt) {
  if (phi.t_range().first > 0.0) return 0.0;
  const auto [x_lo, x_hi] = phi.x_range(0.0);
  if (!(x_hi > x_lo)) return 0.0;
  auto f = [&](double x) { return phi.value(x, 0.0); };
  double s = 0.0;
  if (x_lo < 0.0) s += left * integrate(f, x_lo, std::min(0.0, x_hi), opt.quad_tol, opt.max_depth);
  if (x_hi > 0.0) s += right * integrate(f, std::max(0.0, x_lo), x_hi, opt.quad_tol, opt.max_depth);
  return s;
}

inline double piece_u(const SolutionPiece& p, double x, double t) {
  return p.u_is_xi ? x / t : p.u;
}

}  // namespace detail

/// Burgers weak form of the velocity equation:
/// int int (u phi_t + u^2/2 phi_x) dx dt + int u0 phi(x, 0) dx.
template <TestFunction Phi>
double residual_u(const MeasureSolution& sol, const RiemannData& data, const Phi& phi,
                  const WeakResidualOptions& opt = {}) {
  auto f = [&](const SolutionPiece& p, double x, double t) {
    const double u = detail::piece_u(p, x, t);
    return u * phi.dt(x, t) + 0.5 * u * u * phi.dx(x, t);
  };
  return detail::sector_integral(sol, phi, f, opt) +
         detail::initial_term(phi, data.left.u(), data.right.u(), opt);
}

/// Same with the flux read as u instead of u^2/2, kept for reporting.
template <TestFunction Phi>
double residual_u_literal(const MeasureSolution& sol, const RiemannData& data, const Phi& phi,
                          const WeakResidualOptions& opt = {}) {
  auto f = [&](const SolutionPiece& p, double x, double t) {
    const double u = detail::piece_u(p, x, t);
    return u * phi.dt(x, t) + u * phi.dx(x, t);
  };
  return detail::sector_integral(sol, phi, f, opt) +
         detail::initial_term(phi, data.left.u(), data.right.u(), opt);
}

/// Density equation against the measure rho dx dt + w t delta(x - c t):
/// int int rho (phi_t + u phi_x) + int w t (phi_t + u_line phi_x)(c t, t) dt
/// + int rho0 phi(x, 0) dx.
template <TestFunction Phi>
double residual_rho(const MeasureSolution& sol, const RiemannData& data, const Phi& phi,
                    const WeakResidualOptions& opt = {}) {
  auto f = [&](const SolutionPiece& p, double x, double t) {
    if (p.rho == 0.0) return 0.0;
    return p.rho * (phi.dt(x, t) + detail::piece_u(p, x, t) * phi.dx(x, t));
  };
  double r = detail::sector_integral(sol, phi, f, opt) +
             detail::initial_term(phi, data.left.rho(), data.right.rho(), opt);
  if (sol.singular) {
    const auto& sp = *sol.singular;
    const auto [t_lo, t_hi] = phi.t_range();
    auto line = [&](double t) {
      const double x = sp.c_slope * t;
      return sp.weight_slope * t * (phi.dt(x, t) + sp.u_on_line * phi.dx(x, t));
    };
    r += integrate(line, t_lo, t_hi, opt.quad_tol, opt.max_depth);
  }
  return r;
}

/// Absolute tolerance 1e-8 ||phi||_C1 M^2 with M = max(1, |u_l|, |u_r|, rho_l, rho_r).
template <TestFunction Phi>
double residual_tolerance(const RiemannData& d, const Phi& phi) {
  const double mag = std::max({1.0, std::abs(d.left.u()), std::abs(d.right.u()), d.left.rho(),
                               d.right.rho()});
  return 1e-8 * phi.c1_norm() * mag * mag;
}

/// Fixed-seed battery of bumps straddling the line x = line_slope t, some of
/// them reaching down to t = 0.
inline std::vector<Bump> standard_battery(double line_slope, std::uint64_t seed = 20240917,
                                          std::size_t n = 20) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t0d(0.2, 1.5), off(-0.5, 0.5), rd(0.3, 1.0);
  std::vector<Bump> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t0 = t0d(rng), o = off(rng), rx = rd(rng), rt = rd(rng);
    out.emplace_back(line_slope * t0 + o, t0, rx, rt);
  }
  return out;
}

struct BumpResidual {
  Bump bump;
  double residual_u;
  double residual_u_literal;
  double residual_rho;
  double tolerance;
};

struct WeakFormReport {
  std::vector<BumpResidual> entries;
  double max_ratio_u = 0.0;    // max |residual_u| / tolerance
  double max_ratio_rho = 0.0;  // max |residual_rho| / tolerance
  double max_ratio_literal = 0.0;
  bool pass = true;
};

inline WeakFormReport check_weak_form(const MeasureSolution& sol, const RiemannData& data,
                                      const std::vector<Bump>& battery,
                                      const WeakResidualOptions& opt = {}) {
  WeakFormReport rep;
  for (const Bump& b : battery) {
    BumpResidual e{b, residual_u(sol, data, b, opt), residual_u_literal(sol, data, b, opt),
                   residual_rho(sol, data, b, opt), residual_tolerance(data, b)};
    rep.max_ratio_u = std::max(rep.max_ratio_u, std::abs(e.residual_u) / e.tolerance);
    rep.max_ratio_rho = std::max(rep.max_ratio_rho, std::abs(e.residual_rho) / e.tolerance);
    rep.max_ratio_literal =
        std::max(rep.max_ratio_literal, std::abs(e.residual_u_literal) / e.tolerance);
    rep.entries.push_back(e);
  }
  rep.pass = rep.max_ratio_u <= 1.0 && rep.max_ratio_rho <= 1.0;
  return rep;
}

}  // namespace dshock
