#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dshock/fv_oracle.hpp"
#include "dshock/riemann_solver.hpp"
#include "oracles.hpp"

using namespace dshock;

namespace {

const RiemannData kSym{State(1.0, 1.0), State(-1.0, 1.0)};
const RiemannData kAsym{State(2.0, 1.0), State(0.0, 3.0)};
const RiemannData kContact{State(0.0, 2.0), State(0.0, 1.0)};
const RiemannData kContactRev{State(0.0, 1.0), State(0.0, 2.0)};
const RiemannData kVacuum{State(-1.0, 1.0), State(1.0, 1.0)};

std::pair<double, double> edges(const Segment& s) {
  return std::visit(
      [](const auto& v) -> std::pair<double, double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ShockSegment>) return {v.speed, v.speed};
        else return {v.xi_lo, v.xi_hi};
      },
      s);
}

void expect_well_formed(const WaveFan& fan, const FluxModel& m) {
  ASSERT_FALSE(fan.segments.empty());
  EXPECT_EQ(edges(fan.segments.front()).first, -kInf);
  EXPECT_EQ(edges(fan.segments.back()).second, kInf);
  EXPECT_EQ(std::get<ConstantSegment>(fan.segments.front()).state, fan.data.left);
  EXPECT_EQ(std::get<ConstantSegment>(fan.segments.back()).state, fan.data.right);
  for (std::size_t k = 0; k + 1 < fan.segments.size(); ++k) {
    const auto a = edges(fan.segments[k]), b = edges(fan.segments[k + 1]);
    EXPECT_LE(a.first, a.second);
    EXPECT_NEAR(a.second, b.first, 1e-12 * std::max(1.0, std::abs(b.first)));
  }
  for (const auto& sh : fan.shocks()) {
    EXPECT_TRUE(lax_admissible(m, sh.family, sh.left, sh.right, sh.speed));
    const auto r = oracle::rh(sh.left.u(), sh.left.rho(), sh.right.u(), sh.right.rho(), sh.speed,
                              m.epsilon(), m.g_kind() == GKind::quadratic);
    const double scale = std::max({1.0, sh.left.rho(), sh.right.rho()});
    EXPECT_LE(std::abs(r[0]), 1e-10 * scale * scale);
    EXPECT_LE(std::abs(r[1]), 1e-10 * scale);
  }
}

// Integral of the sampled solution over [-L, L] at time t against the
// boundary flux balance. Near a vacuum rho has an exponential layer of width
// eps in x/t, so those cases converge only as the cells shrink.
void expect_conservative(const WaveFan& fan, const FluxModel& m, double L, double t,
                         double tol = 1e-10, std::size_t n = 2000) {
  const Grid1D g(-L, L, n, 0.5);
  const FieldSnapshot s = exact_cell_averages(fan, m, g, t);
  double mu = 0.0, mr = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    mu += s.u[i] * g.dx();
    mr += s.rho[i] * g.dx();
  }
  const bool quad = m.g_kind() == GKind::quadratic;
  const auto& l = fan.data.left;
  const auto& r = fan.data.right;
  const auto fl = oracle::flux(l.u(), l.rho(), m.epsilon(), quad);
  const auto fr = oracle::flux(r.u(), r.rho(), m.epsilon(), quad);
  EXPECT_NEAR(mu, L * (l.u() + r.u()) + t * (fl[0] - fr[0]), tol);
  EXPECT_NEAR(mr, L * (l.rho() + r.rho()) + t * (fl[1] - fr[1]), tol);
}

}  // namespace

TEST(Classify, Cases) {
  EXPECT_EQ(classify(kSym), CaseTag::two_shock);
  EXPECT_EQ(classify(kContact), CaseTag::rarefaction_shock);
  EXPECT_EQ(classify(kContactRev), CaseTag::shock_rarefaction);
  EXPECT_EQ(classify(kVacuum), CaseTag::two_rarefaction_vacuum);
  EXPECT_EQ(classify({State(0.5, 2.0), State(0.5, 2.0)}), CaseTag::constant);
  EXPECT_STREQ(to_string(CaseTag::two_rarefaction_vacuum), "TwoRarefactionVacuum");
}

TEST(TwoShock, SymmetricData) {
  const FluxModel m = FluxModel::brio(1e-4);
  IntermediateState inter;
  const WaveFan fan = solve_two_shock(m, kSym, &inter);
  EXPECT_EQ(fan.tag, CaseTag::two_shock);
  EXPECT_GT(inter.u_star, -1.0);
  EXPECT_LT(inter.u_star, 1.0);
  EXPECT_LT(std::abs(inter.u_star), 1e-3);
  EXPECT_NEAR(1e-4 * inter.rho_star * inter.rho_star, 1.0, 0.05);
  expect_well_formed(fan, m);
  const auto sh = fan.shocks();
  ASSERT_EQ(sh.size(), 2u);
  EXPECT_LT(sh[0].speed, sh[1].speed);
}

TEST(TwoShock, ConcentrationValueForAsymmetricData) {
  // The deviation from 1 shrinks like sqrt(eps): about 1.3e-2 at 1e-5.
  double prev = INFINITY;
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    IntermediateState inter;
    solve_two_shock(FluxModel::brio(eps), kAsym, &inter);
    const double l = 2.0 * eps * (0.5 * inter.rho_star * inter.rho_star - 0.5);
    EXPECT_LT(std::abs(l - 1.0), prev);
    EXPECT_LT(std::abs(l - 1.0), 5.0 * std::sqrt(eps));
    prev = std::abs(l - 1.0);
  }
  EXPECT_LT(prev, 2e-3);
}

TEST(TwoShock, BracketingAcrossEpsilon) {
  for (const auto& d : {kSym, kAsym, RiemannData{State(5.0, 0.1), State(-3.0, 7.0)}}) {
    for (double eps : {1e-1, 1e-3, 1e-5, 1e-7}) {
      const FluxModel m = FluxModel::brio(eps);
      IntermediateState inter;
      const WaveFan fan = solve_two_shock(m, d, &inter);
      EXPECT_GT(inter.u_star, d.right.u());
      EXPECT_LT(inter.u_star, d.left.u());
      EXPECT_GT(inter.rho_star, std::max(d.left.rho(), d.right.rho()));
      expect_well_formed(fan, m);
    }
  }
}

TEST(TwoShock, QuadraticG) {
  const FluxModel m = FluxModel::quadratic_g(1e-3);
  const WaveFan fan = solve(m, kSym);
  expect_well_formed(fan, m);
  expect_conservative(fan, m, 2.0, 1.0);
}

TEST(TwoShock, RejectsWrongCase) {
  EXPECT_THROW(solve_two_shock(FluxModel::brio(0.1), kVacuum), invalid_input);
  EXPECT_THROW(solve_two_shock(FluxModel::brio(0.1), {State(1, 0), State(0, 1)}), invalid_input);
}

TEST(TwoShock, LargeEpsilonStillSolves) {
  const FluxModel m = FluxModel::brio(1e4);
  const WaveFan fan = solve(m, kSym);
  expect_well_formed(fan, m);
}

TEST(EqualU, ConstantFan) {
  const FluxModel m = FluxModel::brio(0.1);
  const WaveFan fan = solve(m, {State(0.5, 2.0), State(0.5, 2.0)});
  EXPECT_EQ(fan.tag, CaseTag::constant);
  EXPECT_EQ(sample(fan, m, -3.0, 1.0), State(0.5, 2.0));
  EXPECT_EQ(sample(fan, m, 3.0, 1.0), State(0.5, 2.0));
}

TEST(EqualU, RarefactionThenShock) {
  const FluxModel m = FluxModel::brio(0.01);
  const WaveFan fan = solve(m, kContact);
  EXPECT_EQ(fan.tag, CaseTag::rarefaction_shock);
  ASSERT_TRUE(fan.intermediate);
  EXPECT_GT(fan.intermediate->rho_star, 1.0);
  EXPECT_LT(fan.intermediate->rho_star, 2.0);
  EXPECT_TRUE(std::holds_alternative<RarefactionSegment>(fan.segments[1]));
  EXPECT_TRUE(std::holds_alternative<ShockSegment>(fan.segments[3]));
  expect_well_formed(fan, m);
  expect_conservative(fan, m, 1.0, 1.0);
}

TEST(EqualU, ShockThenRarefaction) {
  const FluxModel m = FluxModel::brio(0.01);
  const WaveFan fan = solve(m, kContactRev);
  EXPECT_EQ(fan.tag, CaseTag::shock_rarefaction);
  EXPECT_TRUE(std::holds_alternative<ShockSegment>(fan.segments[1]));
  EXPECT_TRUE(std::holds_alternative<RarefactionSegment>(fan.segments[3]));
  expect_well_formed(fan, m);
  expect_conservative(fan, m, 1.0, 1.0);
}

TEST(EqualU, IntermediateVelocityTendsToCommonValue) {
  double prev = INFINITY;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const WaveFan fan = solve(FluxModel::brio(eps), kContact);
    const double d = std::abs(fan.intermediate->u_star);
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Vacuum, FanStructureAndSamples) {
  const FluxModel m = FluxModel::brio(1e-4);
  const WaveFan fan = solve(m, kVacuum);
  EXPECT_EQ(fan.tag, CaseTag::two_rarefaction_vacuum);
  ASSERT_TRUE(fan.vacuum);
  EXPECT_LT(fan.vacuum->u_star1, fan.vacuum->u_star2);
  EXPECT_NEAR(fan.vacuum->u_star1, -1.0, 1e-2);
  expect_well_formed(fan, m);
  bool has_vacuum = false;
  for (const auto& s : fan.segments) has_vacuum |= std::holds_alternative<VacuumSegment>(s);
  EXPECT_TRUE(has_vacuum);
  for (double t : {0.5, 2.0}) {
    for (double xi = -0.9; xi <= 0.9; xi += 0.05) {
      const State s = sample(fan, m, xi * t, t);
      EXPECT_EQ(s.rho(), 0.0);
      EXPECT_NEAR(s.u(), xi, 1e-10);
    }
  }
  expect_conservative(fan, m, 2.0, 1.0, 1e-7);
}

TEST(Vacuum, EdgesApproachDataVelocities) {
  double prev1 = INFINITY;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const WaveFan fan = solve(FluxModel::brio(eps), kVacuum);
    const double d1 = std::abs(fan.vacuum->u_star1 + 1.0);
    EXPECT_LT(d1, prev1);
    prev1 = d1;
    EXPECT_LT(fan.vacuum->u_star2, 1.0);
  }
}

TEST(Vacuum, QuadraticGHasTrueVacuum) {
  const FluxModel m = FluxModel::quadratic_g(1e-2);
  const WaveFan fan = solve(m, kVacuum);
  ASSERT_TRUE(fan.vacuum);
  EXPECT_NEAR(fan.vacuum->u_star1, rarefaction_u_of_rho(m, 1, kVacuum.left, 0.0), 1e-14);
  EXPECT_NEAR(fan.vacuum->u_star2, rarefaction_u_of_rho(m, 2, kVacuum.right, 0.0), 1e-14);
  const State mid = sample(fan, m, 0.0, 1.0);
  EXPECT_EQ(mid.rho(), 0.0);
  EXPECT_NEAR(mid.u(), 0.0, 1e-14);
  expect_well_formed(fan, m);
  expect_conservative(fan, m, 2.0, 1.0, 1e-7);
}

TEST(Vacuum, NarrowGapMeetsAtPositiveDensity) {
  const FluxModel m = FluxModel::brio(0.1);
  const WaveFan fan = solve(m, {State(-0.01, 1.0), State(0.01, 1.0)});
  ASSERT_TRUE(fan.intermediate);
  EXPECT_GT(fan.intermediate->rho_star, 0.0);
  expect_well_formed(fan, m);
  expect_conservative(fan, m, 2.0, 1.0);
}

TEST(Vacuum, OverlapIsAnError) {
  EXPECT_THROW(solve(FluxModel::brio(0.1), {State(0.0, 1.0), State(0.001, 100.0)}),
               no_intersection_error);
}

TEST(Sample, FarFieldAndMiddleState) {
  const FluxModel m = FluxModel::brio(1e-3);
  const WaveFan fan = solve(m, kAsym);
  EXPECT_EQ(sample(fan, m, -100.0, 1.0), kAsym.left);
  EXPECT_EQ(sample(fan, m, 100.0, 1.0), kAsym.right);
  const auto sh = fan.shocks();
  const State mid = sample(fan, m, 0.5 * (sh[0].speed + sh[1].speed), 1.0);
  EXPECT_EQ(mid.u(), fan.intermediate->u_star);
  EXPECT_EQ(mid.rho(), fan.intermediate->rho_star);
}

TEST(Sample, LeftLimitAtShock) {
  const FluxModel m = FluxModel::brio(1e-2);
  const WaveFan fan = solve(m, kSym);
  const auto sh = fan.shocks();
  EXPECT_EQ(sample(fan, m, sh[0].speed, 1.0), kSym.left);
  EXPECT_EQ(sample(fan, m, sh[1].speed, 1.0).rho(), fan.intermediate->rho_star);
}

TEST(Sample, InsideFanSolvesCharacteristicEquation) {
  const FluxModel m = FluxModel::brio(0.05);
  for (const auto& d : {kContact, kContactRev, kVacuum}) {
    const WaveFan fan = solve(m, d);
    for (const auto& seg : fan.segments) {
      const auto* r = std::get_if<RarefactionSegment>(&seg);
      if (!r) continue;
      for (int k = 1; k < 10; ++k) {
        const double xi = r->xi_lo + (r->xi_hi - r->xi_lo) * k / 10.0;
        const State s = sample(fan, m, xi, 1.0);
        if (s.rho() == 0.0) continue;
        const auto c = characteristic_speeds(m, s);
        EXPECT_NEAR(r->family == 1 ? c.lambda1 : c.lambda2, xi, 1e-10);
      }
    }
  }
}

TEST(Sample, SelfSimilar) {
  const FluxModel m = FluxModel::brio(0.05);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> xd(-1.5, 1.5), kd(0.1, 10.0);
  for (const auto& d : {kSym, kContact, kContactRev, kVacuum}) {
    const WaveFan fan = solve(m, d);
    for (int i = 0; i < 50; ++i) {
      const double x = xd(rng), k = kd(rng);
      const State a = sample(fan, m, x, 1.0), b = sample(fan, m, k * x, k);
      EXPECT_NEAR(a.u(), b.u(), 1e-12);
      EXPECT_NEAR(a.rho(), b.rho(), 1e-12 * std::max(1.0, a.rho()));
    }
  }
}

TEST(Sample, ContinuousAtFanEdges) {
  const FluxModel m = FluxModel::brio(0.05);
  for (const auto& d : {kContact, kContactRev, kVacuum}) {
    const WaveFan fan = solve(m, d);
    for (const auto& seg : fan.segments) {
      const auto* r = std::get_if<RarefactionSegment>(&seg);
      if (!r) continue;
      // rho behaves like the square root of the distance to an edge at
      // vanishing density, so only a shrinking jump is required.
      for (double edge : {r->xi_lo, r->xi_hi}) {
        double prev = INFINITY;
        for (double d : {1e-4, 1e-6, 1e-8, 1e-10}) {
          const State in = sample(fan, m, edge - d, 1.0);
          const State out = sample(fan, m, edge + d, 1.0);
          const double jump = std::abs(in.u() - out.u()) + std::abs(in.rho() - out.rho());
          EXPECT_LE(jump, prev);
          prev = jump;
        }
        EXPECT_LT(prev, 1e-4);
      }
    }
  }
}

TEST(Sample, RejectsBadArguments) {
  const FluxModel m = FluxModel::brio(0.05);
  const WaveFan fan = solve(m, kSym);
  EXPECT_THROW(sample(fan, m, 0.0, 0.0), invalid_input);
  EXPECT_THROW(sample(fan, FluxModel::brio(0.1), 0.0, 1.0), invalid_input);
}

TEST(Conservation, AllCases) {
  for (double eps : {0.5, 0.05, 1e-3}) {
    const FluxModel m = FluxModel::brio(eps);
    for (const auto& d : {kSym, kAsym, kContact, kContactRev, kVacuum}) {
      const bool vac = classify(d) == CaseTag::two_rarefaction_vacuum;
      expect_conservative(solve(m, d), m, 4.0, 0.7, vac ? 1e-7 : 1e-10);
    }
  }
}

TEST(Conservation, VacuumLayerConvergesUnderRefinement) {
  const FluxModel m = FluxModel::brio(1e-3);
  const WaveFan fan = solve(m, kVacuum);
  double prev = INFINITY;
  for (std::size_t n : {500, 2000, 8000}) {
    const Grid1D g(-4.0, 4.0, n, 0.5);
    const FieldSnapshot s = exact_cell_averages(fan, m, g, 0.7);
    double mr = 0.0;
    for (double r : s.rho) mr += r * g.dx();
    const double err = std::abs(mr - (8.0 - 0.7 * 2.0));
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-9);
}
