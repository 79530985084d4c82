#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dshock/flux_model.hpp"
#include "oracles.hpp"

using namespace dshock;

namespace {

Matrix2 fd_jacobian(const FluxModel& m, const State& s, double h) {
  Matrix2 j{};
  for (int c = 0; c < 2; ++c) {
    const double du = c == 0 ? h : 0.0, dr = c == 1 ? h : 0.0;
    const auto fp = m.flux(State(s.u() + du, s.rho() + dr));
    const auto fm = m.flux(State(s.u() - du, s.rho() - dr));
    for (int r = 0; r < 2; ++r) j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
  }
  return j;
}

}  // namespace

TEST(State, RejectsNegativeAndNonFiniteDensity) {
  EXPECT_THROW(State(0.0, -1e-300), invalid_input);
  EXPECT_THROW(State(NAN, 1.0), invalid_input);
  EXPECT_THROW(State(0.0, INFINITY), invalid_input);
  EXPECT_NO_THROW(State(0.0, 0.0));
}

TEST(FluxModel, RejectsNonPositiveEpsilon) {
  EXPECT_THROW(FluxModel::brio(0.0), invalid_input);
  EXPECT_THROW(FluxModel::brio(-1.0), invalid_input);
  EXPECT_THROW(FluxModel::quadratic_g(NAN), invalid_input);
}

TEST(Jacobian, DirectSubstitution) {
  const auto j = jacobian(FluxModel::brio(1.0), State(0.0, 1.0));
  EXPECT_DOUBLE_EQ(j[0][0], 0.0);
  EXPECT_DOUBLE_EQ(j[0][1], 1.0);
  EXPECT_DOUBLE_EQ(j[1][0], 1.0);
  EXPECT_DOUBLE_EQ(j[1][1], -1.0);

  const auto z = jacobian(FluxModel::brio(0.5), State(2.0, 0.0));
  EXPECT_DOUBLE_EQ(z[0][0], 2.0);
  EXPECT_DOUBLE_EQ(z[0][1], 0.0);
  EXPECT_DOUBLE_EQ(z[1][0], 0.0);
  EXPECT_DOUBLE_EQ(z[1][1], 1.5);
}

TEST(Jacobian, MatchesCenteredDifferences) {
  const FluxModel m = FluxModel::brio(0.1);
  const State s(1.0, 2.0);
  const auto j = jacobian(m, s);
  const auto fd = fd_jacobian(m, s, 1e-5);
  EXPECT_NEAR(j[0][0], 1.0, 1e-15);
  EXPECT_NEAR(j[0][1], 0.2, 1e-15);
  EXPECT_NEAR(j[1][0], 2.0, 1e-15);
  EXPECT_NEAR(j[1][1], 0.9, 1e-15);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(j[r][c], fd[r][c], 1e-9);
  }
}

TEST(Jacobian, QuadraticGEntries) {
  const FluxModel m = FluxModel::quadratic_g(0.3);
  const State s(-0.5, 1.7);
  const auto j = jacobian(m, s);
  EXPECT_DOUBLE_EQ(j[1][0], 1.7);
  EXPECT_NEAR(j[1][1], -0.5 - 2.0 * 0.3 * 1.7, 1e-15);
  const auto fd = fd_jacobian(m, s, 1e-5);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(j[r][c], fd[r][c], 1e-9);
  }
}

TEST(Jacobian, FiniteDifferenceErrorIsSecondOrder) {
  const FluxModel m = FluxModel(Pressure::power(4.0), GKind::linear, 0.2);
  const State s(0.3, 1.3);
  const auto j = jacobian(m, s);
  const double e1 = std::abs(fd_jacobian(m, s, 1e-2)[0][1] - j[0][1]);
  const double e2 = std::abs(fd_jacobian(m, s, 5e-3)[0][1] - j[0][1]);
  EXPECT_NEAR(e1 / e2, 4.0, 0.05);
}

TEST(Eigen, GoldenRatioExample) {
  const auto e = eigen(FluxModel::brio(1.0), State(0.0, 1.0));
  EXPECT_NEAR(e.lambda1, -(1.0 + std::sqrt(5.0)) / 2.0, 1e-14);
  EXPECT_NEAR(e.lambda2, (std::sqrt(5.0) - 1.0) / 2.0, 1e-14);
  const auto ref = oracle::eigenvalues(0.0, 1.0, 1.0);
  EXPECT_NEAR(e.lambda1, ref[0], 1e-14);
  EXPECT_NEAR(e.lambda2, ref[1], 1e-14);
}

TEST(Eigen, MatchesGenericSolverOnRandomStates) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(-5, 5), rd(0.01, 10), ed(-6, 0);
  for (int k = 0; k < 500; ++k) {
    const double u = ud(rng), rho = rd(rng), eps = std::pow(10.0, ed(rng));
    const auto e = eigen(FluxModel::brio(eps), State(u, rho));
    const auto ref = oracle::eigenvalues(u, rho, eps);
    EXPECT_NEAR(e.lambda1, ref[0], 1e-12 * std::max(1.0, std::abs(ref[0])));
    EXPECT_NEAR(e.lambda2, ref[1], 1e-12 * std::max(1.0, std::abs(ref[1])));
  }
}

TEST(Eigen, EigenvectorResidualIsTiny) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ud(-5, 5), rd(0.01, 10), ed(-6, 0);
  for (bool quad : {false, true}) {
    for (int k = 0; k < 300; ++k) {
      const double eps = std::pow(10.0, ed(rng));
      const FluxModel m = quad ? FluxModel::quadratic_g(eps) : FluxModel::brio(eps);
      const State s(ud(rng), rd(rng));
      const auto a = jacobian(m, s);
      const auto e = eigen(m, s);
      double norm = 0.0;
      for (auto& row : a) norm = std::max(norm, std::abs(row[0]) + std::abs(row[1]));
      for (const auto& [lam, r] : {std::pair{e.lambda1, e.r1}, std::pair{e.lambda2, e.r2}}) {
        for (int i = 0; i < 2; ++i) {
          const double res = a[i][0] * r[0] + a[i][1] * r[1] - lam * r[i];
          EXPECT_LE(std::abs(res), 1e-12 * norm * std::max(1.0, std::hypot(r[0], r[1])));
        }
      }
    }
  }
}

TEST(Eigen, EigenvectorsAtZeroDensityAreAnError) {
  EXPECT_THROW(eigen(FluxModel::brio(0.1), State(1.0, 0.0)), domain_error);
}

TEST(Eigen, SpeedsAtZeroDensity) {
  const auto c = characteristic_speeds(FluxModel::brio(0.25), State(2.0, 0.0));
  EXPECT_DOUBLE_EQ(c.lambda1, 2.0 - 0.25);
  EXPECT_DOUBLE_EQ(c.lambda2, 2.0);
  // g = -rho^2 has g'(0) = 0, so both speeds meet at u.
  const auto q = characteristic_speeds(FluxModel::quadratic_g(0.25), State(2.0, 0.0));
  EXPECT_DOUBLE_EQ(q.lambda1, 2.0);
  EXPECT_DOUBLE_EQ(q.lambda2, 2.0);
}

TEST(Eigen, SpeedsCoalesceAsEpsilonShrinks) {
  const State s(3.0, 5.0);
  double prev = INFINITY;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
    const auto c = characteristic_speeds(FluxModel::brio(eps), s);
    const double bound = eps / 2.0 + 0.5 * std::sqrt(4.0 * eps * 5.0 * 5.0 + eps * eps);
    EXPECT_LE(std::abs(c.lambda1 - 3.0), bound + 1e-15);
    EXPECT_LE(std::abs(c.lambda2 - 3.0), bound + 1e-15);
    EXPECT_LT(c.lambda2 - c.lambda1, prev);
    prev = c.lambda2 - c.lambda1;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Eigen, StrictHyperbolicityGap) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rd(0.0, 20), ed(-7, 1);
  for (int k = 0; k < 200; ++k) {
    const double rho = rd(rng), eps = std::pow(10.0, ed(rng));
    const auto c = characteristic_speeds(FluxModel::brio(eps), State(0.0, rho));
    const double gap = std::sqrt(4.0 * eps * rho * rho + eps * eps);
    EXPECT_GT(c.lambda2 - c.lambda1, 0.0);
    EXPECT_NEAR(c.lambda2 - c.lambda1, gap, 1e-13 * std::max(1.0, gap));
  }
}

TEST(GenuineNonlinearity, BrioUnitState) {
  const auto r = check_genuine_nonlinearity(FluxModel::brio(1.0), {State(0.0, 1.0)});
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_LT(r.entries[0].d1, 0.0);
  EXPECT_GT(r.entries[0].d2, 0.0);
  EXPECT_TRUE(r.all_ok);
}

TEST(GenuineNonlinearity, RandomGridSmallEpsilon) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(-5, 5), rd(0.1, 10);
  std::vector<State> grid;
  for (int k = 0; k < 100; ++k) grid.emplace_back(ud(rng), rd(rng));
  const auto r = check_genuine_nonlinearity(FluxModel::brio(1e-6), grid);
  EXPECT_TRUE(r.all_ok);
  EXPECT_EQ(r.failures, 0u);
}

TEST(GenuineNonlinearity, QuadraticG) {
  const auto r = check_genuine_nonlinearity(FluxModel::quadratic_g(0.1), {State(1.0, 1.0)});
  EXPECT_TRUE(r.all_ok);
}

TEST(Hypotheses, BrioPasses) {
  const auto r = validate_hypotheses(FluxModel::brio(1.0), 100.0, 64);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.samples, 64u);
}

TEST(Hypotheses, LinearPressureFails) {
  const FluxModel m(Pressure::custom("rho", [](double r) { return r; }, [](double) { return 1.0; }),
                    GKind::linear, 1.0);
  const auto r = validate_hypotheses(m, 10.0, 16);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.reason.empty());
}

TEST(Hypotheses, QuarticPasses) {
  const auto r = validate_hypotheses(FluxModel(Pressure::power(4.0), GKind::linear, 1.0), 10.0, 32);
  EXPECT_TRUE(r.pass);
}

TEST(Hypotheses, DecreasingDerivativeFailsWithLocation) {
  const FluxModel m(Pressure::custom("sqrt", [](double r) { return 2.0 * std::sqrt(r); },
                                     [](double r) { return 1.0 / std::sqrt(r); }),
                    GKind::linear, 1.0);
  const auto r = validate_hypotheses(m, 10.0, 16);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.rho_at_violation, 0.0);
}

TEST(Hypotheses, RejectsBadArguments) {
  EXPECT_THROW(validate_hypotheses(FluxModel::brio(1.0), 0.0, 16), invalid_input);
  EXPECT_THROW(validate_hypotheses(FluxModel::brio(1.0), 1.0, 2), invalid_input);
}

TEST(TabulatedPressure, ReproducesHalfSquare) {
  std::vector<PressureSample> rows;
  for (int i = 0; i <= 40; ++i) {
    const double r = 0.25 * i;
    rows.push_back({r, 0.5 * r * r, r});
  }
  const Pressure p = Pressure::table(rows);
  for (double r : {0.0, 0.1, 1.37, 4.9, 9.99}) {
    EXPECT_NEAR(p.df(r), r, 1e-12);
    EXPECT_NEAR(p.f(r), 0.5 * r * r, 1e-10);
  }
  EXPECT_TRUE(validate_hypotheses(FluxModel(p, GKind::linear, 0.1), 10.0, 32).pass);
}

TEST(TabulatedPressure, RejectsMalformedTables) {
  EXPECT_THROW(Pressure::table({{0, 0, 0}, {1, 0.5, 1}}), invalid_input);
  EXPECT_THROW(Pressure::table({{0.1, 0, 0}, {1, 0.5, 1}, {2, 2, 2}}), invalid_input);
  EXPECT_THROW(Pressure::table({{0, 0, 0}, {1, 0.5, 1}, {1, 2, 2}}), invalid_input);
  EXPECT_THROW(Pressure::table({{0, 0, 0}, {1, 3.0, 1}, {2, 2, 2}}), invalid_input);
}
