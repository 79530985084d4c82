#pragma once

#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dshock/errors.hpp"
#include "dshock/flux_model.hpp"
#include "dshock/numerics.hpp"
#include "dshock/riemann_solver.hpp"
#include "dshock/state.hpp"

namespace dshock {

struct SweepRecord {
  double epsilon = 0.0;
  double u_star = 0.0;
  double rho_star = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double l_estimate = 0.0;       // 2 eps (f(rho*) - f(rho_l))
  double weight_estimate = 0.0;  // (s2 - s1) rho*, the mass between the shocks per unit time
};

/// A sweep entry that could not be solved.
struct SweepNotice {
  double epsilon;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<SweepNotice> notices;
};

/// 1e-1, 1e-2, ..., 1e-7.
inline std::vector<double> default_eps_list() {
  return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
}

namespace detail {

inline void check_eps_list(const std::vector<double>& eps) {
  if (eps.empty()) throw invalid_input("eps list is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) {
      throw invalid_input("eps list: entry " + std::to_string(i + 1) + " is not > 0");
    }
    if (i > 0 && !(eps[i] < eps[i - 1])) {
      throw invalid_input("eps list must be strictly decreasing (entry " +
                          std::to_string(i + 1) + ")");
    }
  }
}

inline double concentration_estimate(const FluxModel& m, double rho_star, double rho_l) {
  const double eps = m.epsilon();
  if (rho_star > 1e10) {
    const double fs = m.f(rho_star);
    return 2.0 * eps * fs * (1.0 - m.f(rho_l) / fs);
  }
  return 2.0 * eps * (m.f(rho_star) - m.f(rho_l));
}

}  // namespace detail

inline SweepRecord make_record(const FluxModel& m, const RiemannData& data,
                               const WaveFan& fan) {
  const auto& in = *fan.intermediate;
  const auto sh = fan.shocks();
  SweepRecord r;
  r.epsilon = m.epsilon();
  r.u_star = in.u_star;
  r.rho_star = in.rho_star;
  r.s1 = sh.at(0).speed;
  r.s2 = sh.at(1).speed;
  r.l_estimate = detail::concentration_estimate(m, in.rho_star, data.left.rho());
  r.weight_estimate = (r.s2 - r.s1) * in.rho_star;
  return r;
}

/// Two-shock solves over a decreasing epsilon list. Entries run concurrently;
/// records come back in list order. An entry that fails becomes a notice.
inline SweepResult sweep(const FluxModel& base, const RiemannData& data,
                         const std::vector<double>& eps_list, bool parallel = true) {
  detail::check_eps_list(eps_list);
  if (classify(data) != CaseTag::two_shock) {
    throw invalid_input("sweep: data is not a two-shock case (needs u_l > u_r)");
  }
  using Entry = std::variant<SweepRecord, SweepNotice>;
  auto solve_one = [&base, &data](double eps) -> Entry {
    const FluxModel m = base.with_epsilon(eps);
    try {
      return make_record(m, data, solve_two_shock(m, data));
    } catch (const solver_error& e) {
      return SweepNotice{eps, e.what()};
    }
  };
  std::vector<Entry> entries;
  entries.reserve(eps_list.size());
  if (parallel) {
    std::vector<std::future<Entry>> jobs;
    for (double eps : eps_list) jobs.push_back(std::async(std::launch::async, solve_one, eps));
    for (auto& j : jobs) entries.push_back(j.get());
  } else {
    for (double eps : eps_list) entries.push_back(solve_one(eps));
  }
  SweepResult out;
  for (auto& e : entries) {
    if (auto* r = std::get_if<SweepRecord>(&e)) {
      out.records.push_back(*r);
    } else {
      out.notices.push_back(std::get<SweepNotice>(e));
    }
  }
  return out;
}

/// Intermediate states of any Riemann case over an epsilon list.
inline std::vector<IntermediateState> sweep_intermediate(const FluxModel& base,
                                                         const RiemannData& data,
                                                         const std::vector<double>& eps_list) {
  detail::check_eps_list(eps_list);
  std::vector<IntermediateState> out;
  for (double eps : eps_list) {
    const FluxModel m = base.with_epsilon(eps);
    const WaveFan fan = solve(m, data);
    out.push_back(fan.intermediate.value_or(
        IntermediateState{data.left.u(), data.left.rho(), eps, std::log(data.left.rho())}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Limit objects.

struct DeltaShockLimit {
  double c_slope = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
  double rho_left = 0.0;
  double rho_right = 0.0;
  double weight_slope = 0.0;  // d(t) = weight_slope * t
  double u_on_line = 0.0;
  double l = 0.0;
};

/// u = u_l on both sides, density jump carried along x = u_l t.
struct ContactLimit {
  double line_slope = 0.0;
  double u = 0.0;
  double rho_left = 0.0;
  double rho_right = 0.0;
};

/// u = u_l | x/t | u_r, rho = rho_l | 0 | rho_r, vacuum on (u_l t, u_r t).
struct VacuumLimit {
  double u_left = 0.0;
  double u_right = 0.0;
  double rho_left = 0.0;
  double rho_right = 0.0;
};

using LimitObject = std::variant<DeltaShockLimit, ContactLimit, VacuumLimit>;

inline DeltaShockLimit delta_shock_limit(const RiemannData& d) {
  const double ul = d.left.u(), ur = d.right.u();
  DeltaShockLimit lim;
  lim.c_slope = 0.5 * (ul + ur);
  lim.u_left = ul;
  lim.u_right = ur;
  lim.rho_left = d.left.rho();
  lim.rho_right = d.right.rho();
  lim.weight_slope = 0.5 * (ul - ur) * (d.left.rho() + d.right.rho());
  lim.u_on_line = 0.5 * (ul + ur);
  lim.l = 0.25 * (ul - ur) * (ul - ur);
  return lim;
}

inline LimitObject closed_form_limit(const RiemannData& d) {
  const double ul = d.left.u(), ur = d.right.u();
  if (ul > ur) return delta_shock_limit(d);
  if (ul == ur) return ContactLimit{ul, ul, d.left.rho(), d.right.rho()};
  return VacuumLimit{ul, ur, d.left.rho(), d.right.rho()};
}

/// Pointwise value of a limit object at (x, t), t > 0, away from the delta
/// line. Left limits on discontinuities.
inline State evaluate_limit(const LimitObject& lim, double x, double t) {
  if (!(t > 0.0)) throw invalid_input("evaluate_limit: t must be > 0");
  const double xi = x / t;
  if (const auto* d = std::get_if<DeltaShockLimit>(&lim)) {
    return xi <= d->c_slope ? State(d->u_left, d->rho_left) : State(d->u_right, d->rho_right);
  }
  if (const auto* c = std::get_if<ContactLimit>(&lim)) {
    return State(c->u, xi <= c->line_slope ? c->rho_left : c->rho_right);
  }
  const auto& v = std::get<VacuumLimit>(lim);
  if (xi <= v.u_left) return State(v.u_left, v.rho_left);
  if (xi <= v.u_right) return State(xi, 0.0);
  return State(v.u_right, v.rho_right);
}

// ---------------------------------------------------------------------------
// Extrapolation.

struct QuantityFit {
  std::string name;
  double last_value = 0.0;
  double extrapolated = 0.0;
  /// Fitted exponent p in v(eps) = v0 + C eps^p; NaN when the tail is flat.
  double order = std::numeric_limits<double>::quiet_NaN();
  bool converged = true;
};

struct ExtrapolationReport {
  DeltaShockLimit limit;
  std::vector<QuantityFit> fits;
  bool converged = true;
};

namespace detail {

// Fits v = v0 + C eps^p through the last three samples.
inline QuantityFit richardson(std::string name, const std::vector<double>& eps,
                              const std::vector<double>& v) {
  QuantityFit fit;
  fit.name = std::move(name);
  const std::size_t n = v.size();
  fit.last_value = v[n - 1];
  fit.extrapolated = v[n - 1];
  const double d1 = v[n - 3] - v[n - 2], d2 = v[n - 2] - v[n - 1];
  const double noise = 64.0 * kMachineEps * std::max(1.0, std::abs(v[n - 1]));
  if (std::abs(d2) <= noise) {
    // Already at the noise floor: nothing left to extrapolate.
    fit.converged = std::abs(d1) <= noise || std::abs(d1) >= std::abs(d2);
    return fit;
  }
  const double contraction = std::abs(d1) / std::abs(d2);
  if (contraction < 1.2 || d1 * d2 <= 0.0) {
    fit.converged = false;
    return fit;
  }
  const double e1 = eps[n - 3], e2 = eps[n - 2], e3 = eps[n - 1];
  auto mismatch = [&](double p) {
    return (std::pow(e1, p) - std::pow(e2, p)) / (std::pow(e2, p) - std::pow(e3, p)) -
           contraction;
  };
  double lo = 1e-3, hi = 8.0;
  if (mismatch(lo) > 0.0 || mismatch(hi) < 0.0) {
    fit.converged = false;
    return fit;
  }
  const double p = bisect(mismatch, lo, hi, 1e-12, 0.0).x;
  const double c = d2 / (std::pow(e2, p) - std::pow(e3, p));
  fit.order = p;
  fit.extrapolated = v[n - 1] - c * std::pow(e3, p);
  return fit;
}

}  // namespace detail

/// Richardson extrapolation to eps -> 0 with an empirically fitted order, for
/// u*, 2 eps (f(rho*) - f(rho_l)), the inter-shock mass rate and the shock
/// midpoint speed. A quantity whose successive differences contract by less
/// than 1.2 is flagged as not converged.
inline ExtrapolationReport extrapolate_limit(const std::vector<SweepRecord>& records,
                                             const RiemannData& data) {
  if (records.size() < 3) throw invalid_input("extrapolate_limit: need >= 3 records");
  if (classify(data) != CaseTag::two_shock) {
    throw invalid_input("extrapolate_limit: data is not a two-shock case");
  }
  std::vector<double> eps, us, ls, ws, cs;
  for (const auto& r : records) {
    eps.push_back(r.epsilon);
    us.push_back(r.u_star);
    ls.push_back(r.l_estimate);
    ws.push_back(r.weight_estimate);
    cs.push_back(0.5 * (r.s1 + r.s2));
  }
  ExtrapolationReport rep;
  rep.fits.push_back(detail::richardson("u_star", eps, us));
  rep.fits.push_back(detail::richardson("l_estimate", eps, ls));
  rep.fits.push_back(detail::richardson("weight_estimate", eps, ws));
  rep.fits.push_back(detail::richardson("shock_midpoint", eps, cs));
  for (const auto& f : rep.fits) rep.converged = rep.converged && f.converged;

  rep.limit = delta_shock_limit(data);
  rep.limit.u_on_line = rep.fits[0].extrapolated;
  rep.limit.l = rep.fits[1].extrapolated;
  rep.limit.weight_slope = rep.fits[2].extrapolated;
  rep.limit.c_slope = rep.fits[3].extrapolated;
  return rep;
}

// ---------------------------------------------------------------------------
// Mass between the shocks.

struct SpikeMassEntry {
  double epsilon;
  double mass;           // (s2 - s1) t rho*
  double rel_deviation;  // |mass - d(t)| / d(t)
};

struct SpikeMassReport {
  double t = 0.0;
  double target = 0.0;  // d(t)
  std::vector<SpikeMassEntry> entries;
  bool trending_to_zero = false;  // last deviation below the first
};

inline SpikeMassReport spike_mass_check(const std::vector<SweepRecord>& records,
                                        const RiemannData& data, double t) {
  if (!(t > 0.0)) throw invalid_input("spike_mass_check: t must be > 0");
  if (classify(data) != CaseTag::two_shock) {
    throw invalid_input("spike_mass_check: data is not a two-shock case");
  }
  SpikeMassReport rep;
  rep.t = t;
  rep.target = delta_shock_limit(data).weight_slope * t;
  for (const auto& r : records) {
    const double mass = (r.s2 - r.s1) * t * r.rho_star;
    rep.entries.push_back({r.epsilon, mass, std::abs(mass - rep.target) / rep.target});
  }
  if (!rep.entries.empty()) {
    rep.trending_to_zero = rep.entries.back().rel_deviation < rep.entries.front().rel_deviation;
  }
  return rep;
}

/// Distances of the two shock lines from x = c t at time t: a = (c - s1) t,
/// b = (s2 - c) t.
inline std::pair<double, double> shock_offsets(const SweepRecord& r, const RiemannData& d,
                                               double t) {
  const double c = 0.5 * (d.left.u() + d.right.u());
  return {(c - r.s1) * t, (r.s2 - c) * t};
}

}  // namespace dshock
