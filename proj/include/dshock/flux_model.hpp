#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dshock/errors.hpp"
#include "dshock/numerics.hpp"
#include "dshock/state.hpp"

namespace dshock {

using ScalarFn = std::function<double(double)>;
using Vector2 = std::array<double, 2>;
using Matrix2 = std::array<std::array<double, 2>, 2>;

/// One row of a tabulated pressure law.
struct PressureSample {
  double rho;
  double f;
  double df;
};

namespace detail {

// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of f' with f
// recovered by exact integration, so f and f' stay mutually consistent.
class TabulatedPressure {
 public:
  explicit TabulatedPressure(std::vector<PressureSample> rows)
      : rows_(std::move(rows)) {
    if (rows_.size() < 3) {
      throw invalid_input("pressure table: need at least 3 rows");
    }
    if (rows_.front().rho != 0.0) {
      throw invalid_input("pressure table: first row must be at rho = 0");
    }
    for (std::size_t i = 1; i < rows_.size(); ++i) {
      if (!(rows_[i].rho > rows_[i - 1].rho)) {
        throw invalid_input("pressure table: rho column must be strictly "
                            "increasing (row " + std::to_string(i + 1) + ")");
      }
    }
    build_slopes();
    build_cumulative();
    check_consistency();
  }

  double df(double x) const {
    if (x >= rows_.back().rho) {
      return rows_.back().df + slope_.back() * (x - rows_.back().rho);
    }
    const std::size_t i = segment(x);
    const double h = width(i), t = (x - rows_[i].rho) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * rows_[i].df + (t3 - 2 * t2 + t) * h * slope_[i] +
           (-2 * t3 + 3 * t2) * rows_[i + 1].df + (t3 - t2) * h * slope_[i + 1];
  }

  double d2f(double x) const {
    if (x >= rows_.back().rho) return slope_.back();
    const std::size_t i = segment(x);
    const double h = width(i), t = (x - rows_[i].rho) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * rows_[i].df + (3 * t2 - 4 * t + 1) * h * slope_[i] +
            (-6 * t2 + 6 * t) * rows_[i + 1].df + (3 * t2 - 2 * t) * h * slope_[i + 1]) /
           h;
  }

  double f(double x) const {
    if (x >= rows_.back().rho) {
      const double d = x - rows_.back().rho;
      return cumulative_.back() + rows_.back().df * d + 0.5 * slope_.back() * d * d;
    }
    const std::size_t i = segment(x);
    return cumulative_[i] + partial_integral(i, x);
  }

 private:
  std::size_t segment(double x) const {
    auto it = std::upper_bound(rows_.begin(), rows_.end(), x,
                               [](double v, const PressureSample& r) { return v < r.rho; });
    std::size_t i = static_cast<std::size_t>(std::distance(rows_.begin(), it));
    i = (i == 0) ? 0 : i - 1;
    return std::min(i, rows_.size() - 2);
  }
  double width(std::size_t i) const { return rows_[i + 1].rho - rows_[i].rho; }

  double partial_integral(std::size_t i, double x) const {
    const double h = width(i), t = (x - rows_[i].rho) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double b00 = t - t3 + 0.5 * t4;
    const double b10 = 0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4;
    const double b01 = t3 - 0.5 * t4;
    const double b11 = -t3 / 3.0 + 0.25 * t4;
    return h * (b00 * rows_[i].df + b10 * h * slope_[i] + b01 * rows_[i + 1].df +
                b11 * h * slope_[i + 1]);
  }

  void build_slopes() {
    const std::size_t n = rows_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = width(i);
      delta[i] = (rows_[i + 1].df - rows_[i].df) / h[i];
    }
    slope_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) continue;
      const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double m = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (m * d0 <= 0.0) return 0.0;
      if (d0 * d1 <= 0.0 && std::abs(m) > std::abs(3 * d0)) return 3 * d0;
      return m;
    };
    slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  void build_cumulative() {
    cumulative_.assign(rows_.size(), rows_.front().f);
    for (std::size_t i = 0; i + 1 < rows_.size(); ++i) {
      cumulative_[i + 1] = cumulative_[i] + partial_integral(i, rows_[i + 1].rho);
    }
  }

  void check_consistency() const {
    double scale = 1.0;
    for (const auto& r : rows_) scale = std::max(scale, std::abs(r.f));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (std::abs(cumulative_[i] - rows_[i].f) > 1e-2 * scale) {
        throw invalid_input(
            "pressure table: f column inconsistent with the integral of f' at "
            "row " + std::to_string(i + 1) + " (tabulated " +
            std::to_string(rows_[i].f) + ", integrated " +
            std::to_string(cumulative_[i]) + ")");
      }
    }
  }

  std::vector<PressureSample> rows_;
  std::vector<double> slope_;
  std::vector<double> cumulative_;
};

}  // namespace detail

/// The pressure-like term f(rho) of the first flux component, with its
/// derivatives. f'' is optional; when absent, convexity checks fall back to
/// divided differences of f'.
class Pressure {
 public:
  enum class Kind { half_square, power, table, custom };

  static Pressure half_square() {
    return Pressure(Kind::half_square, "rho^2/2",
                    [](double r) { return 0.5 * r * r; },
                    [](double r) { return r; }, [](double) { return 1.0; });
  }

  /// f(rho) = rho^n.
  static Pressure power(double n) {
    if (!(n > 0.0)) throw invalid_input("Pressure::power: exponent must be > 0");
    return Pressure(
        Kind::power, "rho^" + format_exponent(n),
        [n](double r) { return std::pow(r, n); },
        [n](double r) { return n * std::pow(r, n - 1.0); },
        [n](double r) { return n * (n - 1.0) * std::pow(r, n - 2.0); });
  }

  static Pressure custom(std::string name, ScalarFn f, ScalarFn df,
                         std::optional<ScalarFn> d2f = std::nullopt) {
    if (!f || !df) throw invalid_input("Pressure::custom: f and f' are required");
    return Pressure(Kind::custom, std::move(name), std::move(f), std::move(df),
                    std::move(d2f));
  }

  static Pressure table(std::vector<PressureSample> rows) {
    auto tab = std::make_shared<detail::TabulatedPressure>(std::move(rows));
    return Pressure(
        Kind::table, "table", [tab](double r) { return tab->f(r); },
        [tab](double r) { return tab->df(r); },
        [tab](double r) { return tab->d2f(r); });
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool is_half_square() const { return kind_ == Kind::half_square; }
  bool has_second_derivative() const { return d2f_.has_value(); }

  double f(double rho) const { return f_(rho); }
  double df(double rho) const { return df_(rho); }
  double d2f(double rho) const { return (*d2f_)(rho); }

 private:
  Pressure(Kind kind, std::string name, ScalarFn f, ScalarFn df,
           std::optional<ScalarFn> d2f)
      : kind_(kind), name_(std::move(name)), f_(std::move(f)), df_(std::move(df)),
        d2f_(std::move(d2f)) {}

  static std::string format_exponent(double n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", n);
    return buf;
  }

  Kind kind_;
  std::string name_;
  ScalarFn f_;
  ScalarFn df_;
  std::optional<ScalarFn> d2f_;
};

/// The decreasing term g(rho) of the second flux component.
enum class GKind { linear, quadratic };  // g = -rho, g = -rho^2

inline const char* to_string(GKind g) {
  return g == GKind::linear ? "linear" : "quadratic";
}

/// Scaled flux F(u, rho) = (u^2/2 + eps f(rho), u rho + eps g(rho)).
/// Immutable after construction.
class FluxModel {
 public:
  FluxModel(Pressure pressure, GKind g_kind, double epsilon)
      : pressure_(std::move(pressure)), g_kind_(g_kind), epsilon_(epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw invalid_input("FluxModel: epsilon must be > 0, got " +
                          std::to_string(epsilon));
    }
  }

  /// f = rho^2/2, g = -rho.
  static FluxModel brio(double epsilon) {
    return FluxModel(Pressure::half_square(), GKind::linear, epsilon);
  }
  /// f = rho^2/2, g = -rho^2.
  static FluxModel quadratic_g(double epsilon) {
    return FluxModel(Pressure::half_square(), GKind::quadratic, epsilon);
  }

  FluxModel with_epsilon(double epsilon) const {
    return FluxModel(pressure_, g_kind_, epsilon);
  }

  double epsilon() const { return epsilon_; }
  GKind g_kind() const { return g_kind_; }
  const Pressure& pressure() const { return pressure_; }
  bool is_brio() const {
    return pressure_.is_half_square() && g_kind_ == GKind::linear;
  }

  double f(double rho) const { return pressure_.f(rho); }
  double df(double rho) const { return pressure_.df(rho); }

  double g(double rho) const {
    return g_kind_ == GKind::linear ? -rho : -rho * rho;
  }
  double dg(double rho) const {
    return g_kind_ == GKind::linear ? -1.0 : -2.0 * rho;
  }

  /// (f(a) - f(b)) / (a - b), continuous at a == b.
  double f_slope(double a, double b) const {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (std::abs(a - b) <= 1e-9 * scale || a == b) return df(0.5 * (a + b));
    return (f(a) - f(b)) / (a - b);
  }
  /// (g(a) - g(b)) / (a - b); exact for both g kinds.
  double g_slope(double a, double b) const {
    return g_kind_ == GKind::linear ? -1.0 : -(a + b);
  }

  Vector2 flux(const State& s) const {
    return {0.5 * s.u() * s.u() + epsilon_ * f(s.rho()),
            s.u() * s.rho() + epsilon_ * g(s.rho())};
  }

 private:
  Pressure pressure_;
  GKind g_kind_;
  double epsilon_;
};

/// Flux Jacobian [[u, eps f'], [rho, u + eps g']].
inline Matrix2 jacobian(const FluxModel& m, const State& s) {
  const double eps = m.epsilon();
  return {{{s.u(), eps * m.df(s.rho())},
           {s.rho(), s.u() + eps * m.dg(s.rho())}}};
}

struct CharacteristicSpeeds {
  double lambda1;
  double lambda2;
};

/// Closed-form eigenvalues of the flux Jacobian. Defined at rho = 0, where
/// they reduce to u + eps g'(0) and u.
inline CharacteristicSpeeds characteristic_speeds(const FluxModel& m,
                                                  const State& s) {
  const double eps = m.epsilon();
  const double a = -0.5 * eps * m.dg(s.rho());  // half the diagonal gap, >= 0
  const double half_gap = std::sqrt(a * a + eps * s.rho() * m.df(s.rho()));
  const double center = s.u() - a;
  return {center - half_gap, center + half_gap};
}

struct EigenPair {
  double lambda1;
  double lambda2;
  Vector2 r1;  // ((lambda1 - u - eps g') / rho, 1)
  Vector2 r2;
};

/// Eigenvalues and right eigenvectors. The eigenvectors carry 1/rho, so rho = 0
/// raises domain_error.
inline EigenPair eigen(const FluxModel& m, const State& s) {
  if (!(s.rho() > 0.0)) {
    throw domain_error("eigen: eigenvectors are singular at rho = 0");
  }
  const auto [l1, l2] = characteristic_speeds(m, s);
  const double d = s.u() + m.epsilon() * m.dg(s.rho());
  return {l1, l2, {(l1 - d) / s.rho(), 1.0}, {(l2 - d) / s.rho(), 1.0}};
}

struct NonlinearityEntry {
  State state;
  double d1;  // grad(lambda1) . r1
  double d2;  // grad(lambda2) . r2
  bool ok;    // d1 < 0 and d2 > 0
};

struct NonlinearityReport {
  std::vector<NonlinearityEntry> entries;
  bool all_ok = true;
  std::size_t failures = 0;
};

/// Directional derivatives of each characteristic speed along its own
/// eigenvector, by centered differences. Flags states where either field
/// fails to be genuinely nonlinear with the expected sign.
inline NonlinearityReport check_genuine_nonlinearity(const FluxModel& m,
                                                     const std::vector<State>& grid) {
  NonlinearityReport report;
  report.entries.reserve(grid.size());
  for (const State& s : grid) {
    if (!(s.rho() > 0.0)) {
      throw invalid_input("check_genuine_nonlinearity: grid states need rho > 0");
    }
    const EigenPair ep = eigen(m, s);
    auto directional = [&](const Vector2& r, int family) {
      const double norm = std::hypot(r[0], r[1]);
      const double h = 1e-5 * s.rho() * norm / std::max(norm, std::abs(r[1]));
      const double du = h * r[0] / norm, dr = h * r[1] / norm;
      auto speed = [&](double u, double rho) {
        const auto cs = characteristic_speeds(m, State(u, rho));
        return family == 1 ? cs.lambda1 : cs.lambda2;
      };
      const double diff = speed(s.u() + du, s.rho() + dr) - speed(s.u() - du, s.rho() - dr);
      return diff / (2.0 * h) * norm;
    };
    NonlinearityEntry e{s, directional(ep.r1, 1), directional(ep.r2, 2), true};
    e.ok = e.d1 < 0.0 && e.d2 > 0.0;
    if (!e.ok) {
      report.all_ok = false;
      ++report.failures;
    }
    report.entries.push_back(e);
  }
  return report;
}

struct HypothesisReport {
  bool pass = true;
  std::size_t samples = 0;
  std::optional<std::size_t> first_violation;
  double rho_at_violation = 0.0;
  std::string reason;
};

/// Sampled check that f' > 0 and f' is strictly increasing on a log-uniform
/// grid of (0, rho_max]. The grid spans `decades` decades below rho_max.
inline HypothesisReport validate_hypotheses(const FluxModel& m, double rho_max,
                                            std::size_t n, double decades = 6.0) {
  if (!(rho_max > 0.0)) throw invalid_input("validate_hypotheses: rho_max must be > 0");
  if (n < 3) throw invalid_input("validate_hypotheses: need at least 3 samples");
  const auto grid = log_grid(rho_max * std::pow(10.0, -decades), rho_max, n);
  HypothesisReport rep;
  rep.samples = n;
  auto fail = [&](std::size_t k, std::string why) {
    rep.pass = false;
    rep.first_violation = k;
    rep.rho_at_violation = grid[k];
    rep.reason = std::move(why);
    return rep;
  };
  double prev = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = m.df(grid[k]);
    if (!std::isfinite(d)) return fail(k, "f' is not finite");
    if (!(d > 0.0)) return fail(k, "f' <= 0");
    if (m.pressure().has_second_derivative() && !(m.pressure().d2f(grid[k]) > 0.0)) {
      return fail(k, "f'' <= 0");
    }
    if (k > 0 && !(d > prev)) return fail(k, "f' not strictly increasing");
    prev = d;
  }
  return rep;
}

}  // namespace dshock
