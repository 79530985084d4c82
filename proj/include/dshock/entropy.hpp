#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dshock/errors.hpp"
#include "dshock/flux_model.hpp"
#include "dshock/riemann_solver.hpp"
#include "dshock/state.hpp"

namespace dshock {

/// Exact rational number with 64-bit parts, kept in lowest terms.
class Rational {
 public:
  constexpr Rational(std::int64_t n = 0, std::int64_t d = 1) : num_(n), den_(d) {
    if (d == 0) throw invalid_input("Rational: zero denominator");
    normalize();
  }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(Rational a, Rational b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Rational operator-(Rational a) { return {-a.num_, a.den_}; }
  friend Rational operator-(Rational a, Rational b) { return a + (-b); }
  friend Rational operator*(Rational a, Rational b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  constexpr void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
  std::int64_t num_;
  std::int64_t den_;
};

/// Polynomial in (u, rho, eps) with rational coefficients.
class Poly {
 public:
  using Exponents = std::array<int, 3>;  // powers of u, rho, eps

  Poly() = default;
  Poly(Rational c) { add(c, {0, 0, 0}); }
  static Poly u() { return monomial(1, {1, 0, 0}); }
  static Poly rho() { return monomial(1, {0, 1, 0}); }
  static Poly eps() { return monomial(1, {0, 0, 1}); }
  static Poly monomial(Rational c, Exponents e) {
    Poly p;
    p.add(c, e);
    return p;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [e, c] : b.terms_) r.add(c, e);
    return r;
  }
  friend Poly operator-(const Poly& a) {
    Poly r;
    for (const auto& [e, c] : a.terms_) r.add(-c, e);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        r.add(ca * cb, {ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]});
      }
    }
    return r;
  }

  /// Partial derivative; var 0 = u, 1 = rho, 2 = eps.
  Poly derivative(int var) const {
    Poly r;
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents f = e;
      --f[var];
      r.add(c * Rational(e[var]), f);
    }
    return r;
  }

  double operator()(double u, double rho, double eps) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      s += c.value() * std::pow(u, e[0]) * std::pow(rho, e[1]) * std::pow(eps, e[2]);
    }
    return s;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    static const char* names[] = {"u", "rho", "eps"};
    for (const auto& [e, c] : terms_) {
      os << (first ? "" : " + ") << c.num();
      if (c.den() != 1) os << "/" << c.den();
      for (int k = 0; k < 3; ++k) {
        if (e[k] == 1) os << "*" << names[k];
        if (e[k] > 1) os << "*" << names[k] << "^" << e[k];
      }
      first = false;
    }
    return os.str();
  }

 private:
  void add(Rational c, Exponents e) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  std::map<Exponents, Rational> terms_;
};

/// Entropy / entropy-flux pair held symbolically.
struct EntropyPair {
  Poly eta;
  Poly q;
  double epsilon;

  double eta_at(const State& s) const { return eta(s.u(), s.rho(), epsilon); }
  double q_at(const State& s) const { return q(s.u(), s.rho(), epsilon); }
};

/// eta = u^2/2 + eps rho^2/2, q = u^3/3 + (u - eps/2) eps rho^2, for the flux
/// with f = rho^2/2, g = -rho only.
inline EntropyPair brio_entropy_pair(const FluxModel& m) {
  if (!m.is_brio()) {
    throw invalid_input("brio_entropy_pair: the pair exists only for f = rho^2/2, g = -rho");
  }
  const Poly u = Poly::u(), r = Poly::rho(), e = Poly::eps();
  const Rational half(1, 2), third(1, 3);
  return {Poly(half) * u * u + Poly(half) * e * r * r,
          Poly(third) * u * u * u + (u - Poly(half) * e) * e * r * r, m.epsilon()};
}

struct PairCheckReport {
  /// Dq - D eta . DF, both components, as polynomials; zero means the
  /// compatibility relations hold identically.
  Poly symbolic_residual_u;
  Poly symbolic_residual_rho;
  bool symbolic_zero = false;
  double max_closed_form_residual = 0.0;  // symbolic residual evaluated on the grid
  double max_fd_residual = 0.0;           // centered differences, step fd_step
  double fd_step = 1e-5;
  std::size_t states = 0;
};

/// Checks q_u = u eta_u + rho eta_rho and q_rho = eps rho eta_u + (u - eps) eta_rho.
inline PairCheckReport verify_pair(const EntropyPair& pair, const std::vector<State>& grid,
                                   double fd_step = 1e-5) {
  const Poly u = Poly::u(), r = Poly::rho(), e = Poly::eps();
  // Jacobian of (u^2/2 + eps rho^2/2, u rho - eps rho).
  const Poly a11 = u, a12 = e * r, a21 = r, a22 = u - e;
  const Poly eu = pair.eta.derivative(0), er = pair.eta.derivative(1);
  const Poly qu = pair.q.derivative(0), qr = pair.q.derivative(1);

  PairCheckReport rep;
  rep.fd_step = fd_step;
  rep.states = grid.size();
  rep.symbolic_residual_u = qu - (eu * a11 + er * a21);
  rep.symbolic_residual_rho = qr - (eu * a12 + er * a22);
  rep.symbolic_zero = rep.symbolic_residual_u.is_zero() && rep.symbolic_residual_rho.is_zero();

  const FluxModel m = FluxModel::brio(pair.epsilon);
  const double h = fd_step, eps = pair.epsilon;
  for (const State& s : grid) {
    const double cu = rep.symbolic_residual_u(s.u(), s.rho(), eps);
    const double cr = rep.symbolic_residual_rho(s.u(), s.rho(), eps);
    rep.max_closed_form_residual =
        std::max({rep.max_closed_form_residual, std::abs(cu), std::abs(cr)});

    auto d = [&](const Poly& p, int var) {
      const double du = var == 0 ? h : 0.0, dr = var == 1 ? h : 0.0;
      return (p(s.u() + du, s.rho() + dr, eps) - p(s.u() - du, s.rho() - dr, eps)) /
             (2.0 * h);
    };
    const Matrix2 J = jacobian(m, s);
    const double eta_u = d(pair.eta, 0), eta_r = d(pair.eta, 1);
    const double ru = d(pair.q, 0) - (eta_u * J[0][0] + eta_r * J[1][0]);
    const double rr = d(pair.q, 1) - (eta_u * J[0][1] + eta_r * J[1][1]);
    rep.max_fd_residual = std::max({rep.max_fd_residual, std::abs(ru), std::abs(rr)});
  }
  return rep;
}

struct DeltaCoefficientReport {
  double coeff1 = 0.0;  // -s1 [eta] + [q] across the 1-shock
  double coeff2 = 0.0;  // same across the 2-shock
  double epsilon = 0.0;
};

/// Entropy production coefficients of the two shocks; jumps are right minus
/// left.
inline DeltaCoefficientReport delta_coefficients(const FluxModel& m, const RiemannData& data,
                                                 const IntermediateState& inter) {
  const EntropyPair pair = brio_entropy_pair(m);
  const State& L = data.left;
  const State& R = data.right;
  const State M(inter.u_star, inter.rho_star);
  const double s1 = shock_speed(m, 1, L, M);
  const double s2 = shock_speed(m, 2, M, R);
  auto coeff = [&](const State& a, const State& b, double s) {
    return -s * (pair.eta_at(b) - pair.eta_at(a)) + (pair.q_at(b) - pair.q_at(a));
  };
  return {coeff(L, M, s1), coeff(M, R, s2), m.epsilon()};
}

/// Limit of each coefficient as eps -> 0: (u_r - u_l)(u_l - u_r)^2 / 24.
inline double delta_coefficient_limit(const RiemannData& d) {
  const double j = d.left.u() - d.right.u();
  return -j * j * j / 24.0;
}

/// True iff both coefficients are <= 0 up to 1e-12 times their scale.
inline bool admissibility_verdict(const DeltaCoefficientReport& r) {
  const double tol = 1e-12 * std::max({1.0, std::abs(r.coeff1), std::abs(r.coeff2)});
  return r.coeff1 <= tol && r.coeff2 <= tol;
}

}  // namespace dshock
