#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <future>
#include <ostream>
#include <string>
#include <vector>

#include "dshock/errors.hpp"
#include "dshock/flux_model.hpp"
#include "dshock/limit_analysis.hpp"
#include "dshock/riemann_solver.hpp"
#include "dshock/state.hpp"

namespace dshock {

/// Uniform grid of n_cells cells on [x_min, x_max].
struct Grid1D {
  double x_min;
  double x_max;
  std::size_t n_cells;
  double cfl;

  Grid1D(double x_min_, double x_max_, std::size_t n, double cfl_)
      : x_min(x_min_), x_max(x_max_), n_cells(n), cfl(cfl_) {
    if (!(x_max > x_min)) throw invalid_input("Grid1D: need x_max > x_min");
    if (n_cells < 16) throw invalid_input("Grid1D: need at least 16 cells");
    if (!(cfl > 0.0 && cfl < 1.0)) throw invalid_input("Grid1D: cfl must lie in (0, 1)");
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(n_cells); }
  double center(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
  Grid1D with_cells(std::size_t n) const { return Grid1D(x_min, x_max, n, cfl); }
};

struct FieldSnapshot {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> rho;
};

struct StepInfo {
  double dt = 0.0;
  double courant_after = 0.0;  // max|lambda| of the new state times dt / dx
  double rho_flux_left = 0.0;  // numerical density flux through x_min
  double rho_flux_right = 0.0;
  std::size_t clips = 0;       // cells where rho went negative and was reset to 0
  double min_rho = 0.0;        // smallest density before clipping
};

/// Cell averages of the Riemann data.
inline FieldSnapshot initial_snapshot(const RiemannData& d, const Grid1D& g) {
  FieldSnapshot s;
  s.u.resize(g.n_cells);
  s.rho.resize(g.n_cells);
  const double h = g.dx();
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double a = g.center(i) - 0.5 * h, b = a + h;
    const double wl = std::clamp(-a / h, 0.0, 1.0);
    const double wr = b <= 0.0 ? 0.0 : (a >= 0.0 ? 1.0 : 1.0 - wl);
    s.u[i] = wl * d.left.u() + wr * d.right.u();
    s.rho[i] = wl * d.left.rho() + wr * d.right.rho();
  }
  return s;
}

inline double max_speed(const FluxModel& m, const FieldSnapshot& s) {
  double a = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const auto c = characteristic_speeds(m, State(s.u[i], std::max(0.0, s.rho[i])));
    a = std::max({a, std::abs(c.lambda1), std::abs(c.lambda2)});
  }
  return a;
}

/// One Lax-Friedrichs step on (u, rho) with the global dissipation speed
/// alpha = max|lambda|, dt = cfl dx / alpha (shortened to `dt_max` when
/// smaller). Outflow boundaries copy the edge cells.
inline FieldSnapshot step(const FluxModel& m, const FieldSnapshot& snap, const Grid1D& g,
                          StepInfo* info = nullptr, double dt_max = kInf) {
  const std::size_t n = snap.u.size();
  if (n != g.n_cells || snap.rho.size() != n) {
    throw invalid_input("step: snapshot size does not match the grid");
  }
  const double h = g.dx();
  const double alpha = max_speed(m, snap);
  const double dt = std::min(g.cfl * h / alpha, dt_max);
  const double eps = m.epsilon();

  auto flux_u = [&](std::size_t i) { return 0.5 * snap.u[i] * snap.u[i] + eps * m.f(snap.rho[i]); };
  auto flux_r = [&](std::size_t i) { return snap.u[i] * snap.rho[i] + eps * m.g(snap.rho[i]); };
  std::vector<double> fu(n + 1), fr(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const std::size_t l = k == 0 ? 0 : k - 1, r = k == n ? n - 1 : k;
    fu[k] = 0.5 * (flux_u(l) + flux_u(r)) - 0.5 * alpha * (snap.u[r] - snap.u[l]);
    fr[k] = 0.5 * (flux_r(l) + flux_r(r)) - 0.5 * alpha * (snap.rho[r] - snap.rho[l]);
  }
  FieldSnapshot out;
  out.t = snap.t + dt;
  out.u.resize(n);
  out.rho.resize(n);
  const double lam = dt / h;
  StepInfo st;
  st.dt = dt;
  st.rho_flux_left = fr[0];
  st.rho_flux_right = fr[n];
  st.min_rho = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i] = snap.u[i] - lam * (fu[i + 1] - fu[i]);
    out.rho[i] = snap.rho[i] - lam * (fr[i + 1] - fr[i]);
    st.min_rho = std::min(st.min_rho, out.rho[i]);
    if (out.rho[i] < 0.0) {
      out.rho[i] = 0.0;
      ++st.clips;
    }
  }
  st.courant_after = max_speed(m, out) * dt / h;
  if (st.courant_after > 1.05 * g.cfl) {
    throw simulation_error("step: post-step Courant number " + std::to_string(st.courant_after) +
                           " exceeds the target " + std::to_string(g.cfl) + " by more than 5%");
  }
  if (info) *info = st;
  return out;
}

struct RunStats {
  std::size_t steps = 0;
  std::size_t clips = 0;
  double min_rho = kInf;
};

namespace detail {

inline void check_domain(const WaveFan& fan, const Grid1D& g, double t_end) {
  double lo = kInf, hi = -kInf;
  for (const auto& seg : fan.segments) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ShockSegment>) {
            lo = std::min(lo, s.speed);
            hi = std::max(hi, s.speed);
          } else {
            if (std::isfinite(s.xi_lo)) lo = std::min(lo, s.xi_lo), hi = std::max(hi, s.xi_lo);
            if (std::isfinite(s.xi_hi)) lo = std::min(lo, s.xi_hi), hi = std::max(hi, s.xi_hi);
          }
        },
        seg);
  }
  if (!std::isfinite(lo)) return;  // constant solution
  if (!(lo * t_end > g.x_min) || !(hi * t_end < g.x_max)) {
    throw simulation_error("domain overflow: waves span [" + std::to_string(lo * t_end) + ", " +
                           std::to_string(hi * t_end) + "] at t_end, outside [" +
                           std::to_string(g.x_min) + ", " + std::to_string(g.x_max) + "]");
  }
}

}  // namespace detail

/// Evolves the Riemann data to t_end.
inline FieldSnapshot run(const FluxModel& m, const RiemannData& data, const Grid1D& g,
                         double t_end, RunStats* stats = nullptr) {
  if (!(t_end > 0.0)) throw invalid_input("run: t_end must be > 0");
  FieldSnapshot s = initial_snapshot(data, g);
  RunStats rs;
  while (s.t < t_end) {
    StepInfo info;
    s = step(m, s, g, &info, t_end - s.t);
    if (t_end - s.t < 1e-14 * t_end) s.t = t_end;
    ++rs.steps;
    rs.clips += info.clips;
    rs.min_rho = std::min(rs.min_rho, info.min_rho);
  }
  if (stats) *stats = rs;
  return s;
}

/// Cell averages of the exact solution at time t: the cell is split at every
/// wave edge and each piece integrated with 5-point Gauss-Legendre after the
/// substitution x = p + (q - p)(3 tau^2 - 2 tau^3), which smooths the square
/// root behaviour of rho next to a fan edge.
inline FieldSnapshot exact_cell_averages(const WaveFan& fan, const FluxModel& m,
                                         const Grid1D& g, double t) {
  std::vector<double> edges;
  for (const auto& seg : fan.segments) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ShockSegment>) {
            edges.push_back(s.speed * t);
          } else {
            if (std::isfinite(s.xi_lo)) edges.push_back(s.xi_lo * t);
            if (std::isfinite(s.xi_hi)) edges.push_back(s.xi_hi * t);
          }
        },
        seg);
  }
  std::sort(edges.begin(), edges.end());
  static constexpr double node[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
  static constexpr double weight[5] = {0.2369268850561891, 0.4786286704993665,
                                       0.5688888888888889, 0.4786286704993665,
                                       0.2369268850561891};
  FieldSnapshot out;
  out.t = t;
  out.u.resize(g.n_cells);
  out.rho.resize(g.n_cells);
  const double h = g.dx();
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double a = g.center(i) - 0.5 * h, b = a + h;
    std::vector<double> cuts{a};
    for (double e : edges) {
      if (e > a && e < b) cuts.push_back(e);
    }
    cuts.push_back(b);
    double su = 0.0, sr = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double p = cuts[k], len = cuts[k + 1] - cuts[k];
      if (!(len > 0.0)) continue;
      for (int q = 0; q < 5; ++q) {
        const double tau = 0.5 * (1.0 + node[q]);
        const double jac = 6.0 * tau * (1.0 - tau) * len;
        const State s = sample(fan, m, p + len * tau * tau * (3.0 - 2.0 * tau), t);
        su += 0.5 * weight[q] * jac * s.u();
        sr += 0.5 * weight[q] * jac * s.rho();
      }
    }
    out.u[i] = su / h;
    out.rho[i] = sr / h;
  }
  return out;
}

struct CompareEntry {
  std::size_t n_cells = 0;
  double l1_u = 0.0;
  double l1_rho = 0.0;
  double l1 = 0.0;  // l1_u + l1_rho
  std::size_t steps = 0;
  std::size_t clips = 0;
};

struct CompareReport {
  CaseTag tag = CaseTag::constant;
  double epsilon = 0.0;
  double t_end = 0.0;
  std::vector<CompareEntry> entries;
  std::vector<double> orders;  // log2(l1[k] / l1[k+1]) for successive doublings
};

inline double l1_distance(const std::vector<double>& a, const std::vector<double>& b, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * h;
}

/// L1 distance between the finite-volume solution and the exact solution at
/// each refinement level. Levels run concurrently.
inline CompareReport run_compare(const FluxModel& m, const RiemannData& data, const Grid1D& base,
                                 double t_end,
                                 const std::vector<std::size_t>& levels = {400, 800, 1600}) {
  if (levels.empty()) throw invalid_input("run_compare: no refinement levels");
  const WaveFan fan = solve(m, data);
  detail::check_domain(fan, base, t_end);
  auto one = [&](std::size_t n) {
    const Grid1D g = base.with_cells(n);
    RunStats st;
    const FieldSnapshot num = run(m, data, g, t_end, &st);
    const FieldSnapshot ex = exact_cell_averages(fan, m, g, t_end);
    CompareEntry e;
    e.n_cells = n;
    e.l1_u = l1_distance(num.u, ex.u, g.dx());
    e.l1_rho = l1_distance(num.rho, ex.rho, g.dx());
    e.l1 = e.l1_u + e.l1_rho;
    e.steps = st.steps;
    e.clips = st.clips;
    return e;
  };
  std::vector<std::future<CompareEntry>> jobs;
  for (std::size_t n : levels) jobs.push_back(std::async(std::launch::async, one, n));
  CompareReport rep;
  rep.tag = fan.tag;
  rep.epsilon = m.epsilon();
  rep.t_end = t_end;
  for (auto& j : jobs) rep.entries.push_back(j.get());
  for (std::size_t k = 0; k + 1 < rep.entries.size(); ++k) {
    const auto& a = rep.entries[k];
    const auto& b = rep.entries[k + 1];
    rep.orders.push_back(std::log(a.l1 / b.l1) /
                         std::log(static_cast<double>(b.n_cells) / static_cast<double>(a.n_cells)));
  }
  return rep;
}

struct SpikeReport {
  double epsilon = 0.0;
  double t_end = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double window_mass = 0.0;      // integral of rho over the window
  double background_mass = 0.0;  // rho_l and rho_r on either side of x = c t
  double excess_mass = 0.0;      // window_mass - background_mass
  double target = 0.0;           // d(t_end)
  double rel_error = 0.0;        // |excess - target| / target
  double peak_rho = 0.0;
  double cells_across_gap = 0.0;
};

/// Density mass concentrated near x = c t_end in the finite-volume solution,
/// over a window ten inter-shock gaps wide, minus the far-field background.
inline SpikeReport spike_probe(const FluxModel& m, const RiemannData& data, const Grid1D& g,
                               double t_end) {
  if (classify(data) != CaseTag::two_shock) {
    throw invalid_input("spike_probe: data is not a two-shock case");
  }
  const WaveFan fan = solve_two_shock(m, data);
  detail::check_domain(fan, g, t_end);
  const auto sh = fan.shocks();
  const double gap = (sh[1].speed - sh[0].speed) * t_end;
  SpikeReport rep;
  rep.epsilon = m.epsilon();
  rep.t_end = t_end;
  rep.cells_across_gap = gap / g.dx();
  if (rep.cells_across_gap < 8.0) {
    throw invalid_input("spike_probe: only " + std::to_string(rep.cells_across_gap) +
                        " cells across the inter-shock gap; need >= 8 (refine the grid)");
  }
  const double c = 0.5 * (data.left.u() + data.right.u()) * t_end;
  rep.window_lo = c - 5.0 * gap;
  rep.window_hi = c + 5.0 * gap;
  const FieldSnapshot s = run(m, data, g, t_end);
  const double h = g.dx();
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double a = g.center(i) - 0.5 * h, b = a + h;
    const double overlap = std::min(b, rep.window_hi) - std::max(a, rep.window_lo);
    if (overlap > 0.0) rep.window_mass += s.rho[i] * overlap;
    if (overlap > 0.0) rep.peak_rho = std::max(rep.peak_rho, s.rho[i]);
  }
  rep.background_mass = data.left.rho() * (c - rep.window_lo) + data.right.rho() * (rep.window_hi - c);
  rep.excess_mass = rep.window_mass - rep.background_mass;
  rep.target = delta_shock_limit(data).weight_slope * t_end;
  rep.rel_error = std::abs(rep.excess_mass - rep.target) / rep.target;
  return rep;
}

/// CSV with header x,u,rho and 17 significant digits.
inline void write_snapshot_csv(std::ostream& os, const FieldSnapshot& s, const Grid1D& g) {
  os << "x,u,rho\n";
  char buf[96];
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.center(i), s.u[i], s.rho[i]);
    os << buf;
  }
}

}  // namespace dshock
