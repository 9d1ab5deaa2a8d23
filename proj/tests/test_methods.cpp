#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"

namespace dfo {
namespace {

using testing::Rng;

SolverConfig config_for(Method m, long max_iter, bool stop = false) {
  SolverConfig c;
  c.method = m;
  c.max_iter = max_iter;
  c.use_stopping_rule = stop;
  return c;
}

// --- scalar helpers --------------------------------------------------------------

TEST(ThetaNext, Examples) {
  EXPECT_DOUBLE_EQ(theta_next(0.0), 1.0);
  EXPECT_NEAR(theta_next(1.0), 0.5 * (1.0 + std::sqrt(5.0)), 1e-15);
}

TEST(ThetaNextProperty, RecursionAndGrowth) {
  double theta = 0.0;
  for (int k = 1; k <= 10000; ++k) {
    const double next = theta_next(theta);
    EXPECT_NEAR(next * next - next, theta * theta, 1e-9 * (1.0 + theta * theta));
    EXPECT_GE(next, 0.5 * (k + 1) - 1e-12);
    theta = next;
  }
}

TEST(UpdateWeightedAverage, MatchesDirectSum) {
  Rng rng(1);
  Vector avg;
  double s = 0.0;
  Vector num = Vector::Zero(3);
  double den = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vector u = rng.vector(3);
    const double w = rng.uniform(0.0, 2.0);
    std::tie(avg, s) = update_weighted_average(avg, s, u, w);
    num += w * u;
    den += w;
    EXPECT_NEAR(s, den, 1e-10);
    EXPECT_LE((avg - num / den).norm(), 1e-10);
  }
}

TEST(UpdateWeightedAverage, ZeroTotalWeightKeepsZero) {
  const auto [avg, s] = update_weighted_average(Vector(), 0.0, Vector::Ones(2), 0.0);
  EXPECT_EQ(avg, Vector::Zero(2));
  EXPECT_EQ(s, 0.0);
}

TEST(StoppingCheck, Examples) {
  EXPECT_EQ(stopping_check(1e-5, 1e-3, 1e-2), StopVerdict::kStopBoth);
  EXPECT_EQ(stopping_check(1e-3, 1e-3, 1e-2), StopVerdict::kContinue);
  EXPECT_EQ(stopping_check(1e-5, 1.0, 1e-2), StopVerdict::kContinue);
  EXPECT_EQ(stopping_check(1e-5, 1.0, 1e-2, StopRule::kEither), StopVerdict::kStopDs);
  EXPECT_EQ(stopping_check(1.0, 1e-3, 1e-2, StopRule::kEither), StopVerdict::kStopPf);
  EXPECT_EQ(stopping_check(1.0, 1.0, 1e-2, StopRule::kEither), StopVerdict::kContinue);
}

TEST(RestartInterval, FromKappa) {
  EXPECT_EQ(restart_interval_from_kappa(10.0, 1.0 / std::exp(1.0)),
            static_cast<long>(std::floor(20.0 * std::exp(1.0))));
  EXPECT_EQ(restart_interval_from_kappa(1.0, 0.5), 4);
  EXPECT_EQ(restart_interval_from_kappa(1e-6, 0.5), 1);
  EXPECT_THROW(restart_interval_from_kappa(0.0, 0.5), ConfigError);
  EXPECT_THROW(restart_interval_from_kappa(1.0, 1.0), ConfigError);
}

TEST(RegularizedBudget, Formula) {
  const double l = 4.0;
  const double d = 0.01;
  const double r = 3.0;
  const double e = 1e-3;
  const double expect =
      2.0 * std::sqrt((l + d) / d) * std::log(r * std::sqrt(2.0 * (l + 2.0 * d)) / e);
  EXPECT_DOUBLE_EQ(regularized_budget(l, d, r, e), expect);
}

TEST(MethodNames, RoundTrip) {
  for (Method m : {Method::kDG, Method::kDFG, Method::kRDFG, Method::kRegDFG,
                   Method::kHybrid}) {
    EXPECT_EQ(parse_method(method_name(m)), m);
  }
  EXPECT_EQ(parse_method("R-DFG"), Method::kRDFG);
  EXPECT_EQ(parse_method("dg"), Method::kDG);
  EXPECT_THROW(parse_method("newton"), ConfigError);
  for (Recovery r : {Recovery::kLast, Recovery::kAverage, Recovery::kBoth}) {
    EXPECT_EQ(parse_recovery(recovery_name(r)), r);
  }
}

// --- single steps -------------------------------------------------------------------

TEST(DgStep, ToyReachesOptimumInOneStep) {
  const auto prob = testing::toy_equality_qp();
  const DualOracle oracle(prob);
  const auto s = dg_step(DualMethodState::start(Vector::Zero(1)), oracle, 0.5);
  EXPECT_EQ(s.k, 1);
  EXPECT_NEAR(s.x[0], 0.5, 1e-12);
  EXPECT_NEAR(s.avg_u[0], 0.0, 1e-12);
  EXPECT_NEAR(s.s_alpha, 0.5, 1e-15);
}

TEST(DfgStep, FirstStepHasNoMomentum) {
  const auto prob = testing::toy_equality_qp();
  const DualOracle oracle(prob);
  const auto s = dfg_step(DualMethodState::start(Vector::Zero(1)), oracle, 2.0);
  EXPECT_NEAR(s.x[0], 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(s.theta, 1.0);
  // beta = (theta_1 - 1) / theta_2 = 0, so y^2 = x^1.
  EXPECT_NEAR(s.y[0], 0.5, 1e-12);
  EXPECT_NEAR(s.w[0], 0.5, 1e-12);
}

// --- runners on the toy problem ------------------------------------------------------

TEST(RunDg, ToyStopsWithinFiveIterations) {
  const auto prob = testing::toy_equality_qp();
  const DualOracle oracle(prob);
  SolverConfig c = config_for(Method::kDG, 100, true);
  c.epsilon = 1e-6;
  const auto r = run_dg(oracle, c);
  EXPECT_EQ(r.termination, Termination::kConverged);
  ASSERT_TRUE(r.stop_last.has_value());
  EXPECT_LE(*r.stop_last, 5);
  EXPECT_NEAR(r.state.x[0], 0.5, 1e-6);
  EXPECT_NEAR(r.trace.rows.back().d, 0.25, 1e-12);
}

TEST(RunDfg, ToyConvergesToKnownSolution) {
  const auto prob = testing::toy_equality_qp();
  const DualOracle oracle(prob);
  SolverConfig c = config_for(Method::kDFG, 1000, true);
  c.epsilon = 1e-8;
  const auto r = run_dfg(oracle, c);
  EXPECT_TRUE(r.converged());
  EXPECT_NEAR(r.state.x[0], 0.5, 1e-7);
  EXPECT_NEAR(r.state.last_u[0], 0.5, 1e-7);
  const auto& row0 = r.trace.rows.front();
  EXPECT_EQ(row0.k, 0);
  EXPECT_DOUBLE_EQ(row0.d, 0.0);
  EXPECT_NEAR(row0.infeas_last, 1.0, 1e-12);
  EXPECT_NEAR(row0.infeas_avg, 1.0, 1e-12);
  EXPECT_TRUE(std::isnan(row0.subopt_last));
}

TEST(Run, MaxIterZeroGivesSingleRow) {
  const auto prob = testing::toy_equality_qp();
  const DualOracle oracle(prob);
  for (Method m : {Method::kDG, Method::kDFG}) {
    const auto r = run(oracle, config_for(m, 0, true));
    EXPECT_EQ(r.trace.rows.size(), 1U);
    EXPECT_EQ(r.termination, Termination::kMaxIter);
    EXPECT_FALSE(r.converged());
  }
}

TEST(Run, WithoutStoppingRuleRunsFullBudget) {
  const auto prob = testing::random_inequality_qp(1, 10, 6);
  const DualOracle oracle(prob);
  for (Method m : {Method::kDG, Method::kDFG}) {
    const auto r = run(oracle, config_for(m, 37));
    ASSERT_EQ(r.trace.rows.size(), 38U);
    for (std::size_t i = 0; i < r.trace.rows.size(); ++i) {
      EXPECT_EQ(r.trace.rows[i].k, static_cast<long>(i));
    }
    EXPECT_EQ(r.trace.method, m);
  }
}

TEST(Run, ReferencePopulatesSuboptimality) {
  const auto prob = testing::toy_equality_qp();
  const DualOracle oracle(prob);
  RunOptions opts;
  Vector u_star = Vector::Constant(2, 0.5);
  opts.reference = TraceReference{0.25, Vector::Constant(1, 0.5), u_star};
  const auto r = run_dfg(oracle, config_for(Method::kDFG, 5), opts);
  const auto& row0 = r.trace.rows.front();
  EXPECT_NEAR(row0.subopt_last, -0.25, 1e-12);
  EXPECT_NEAR(row0.dist_xstar, 0.5, 1e-12);
  EXPECT_NEAR(row0.dist_ustar_last, std::sqrt(0.5), 1e-12);
}

// --- configuration errors ------------------------------------------------------------

TEST(RunConfig, InvalidSettingsThrow) {
  const auto prob = testing::random_inequality_qp(2, 6, 4);
  const DualOracle oracle(prob);
  const double l = oracle.lipschitz_dual();
  auto expect_config_error = [&](SolverConfig c) {
    EXPECT_THROW(run(oracle, c), ConfigError) << method_name(c.method);
  };
  SolverConfig c = config_for(Method::kDG, 10);
  c.epsilon = 0.0;
  expect_config_error(c);
  c = config_for(Method::kDFG, 10);
  c.x0 = Vector::Ones(4);  // outside the nonpositive orthant
  expect_config_error(c);
  c.x0 = Vector::Zero(3);
  expect_config_error(c);
  c = config_for(Method::kDG, 10);
  c.alpha = 2.0 / l;
  expect_config_error(c);
  c = config_for(Method::kDG, 10);
  c.lipschitz_g = 0.5 * l;
  expect_config_error(c);
  c = config_for(Method::kRDFG, 10);
  expect_config_error(c);
  c.adaptive_restart = true;
  expect_config_error(c);
  c = config_for(Method::kRDFG, 10);
  c.restart_interval = 0;
  expect_config_error(c);
  c = config_for(Method::kHybrid, 10);
  c.hybrid_k = 0;
  expect_config_error(c);
  c = config_for(Method::kRegDFG, 10);
  c.delta = -1.0;
  expect_config_error(c);
}

// --- dual-route checks: independent re-implementations --------------------------------

// Plain DG with constant step written against the oracle only.
TEST(RunDgOracle, IteratesAndAveragesMatchIndependentLoop) {
  const auto prob = testing::random_inequality_qp(3, 12, 8);
  const DualOracle oracle(prob);
  const double alpha = 1.0 / oracle.lipschitz_dual();
  const long iters = 60;
  const auto r = run_dg(oracle, config_for(Method::kDG, iters));

  Vector x = Vector::Zero(prob.p());
  Vector sum_u = Vector::Zero(prob.n());
  double sum_w = 0.0;
  for (long k = 0; k <= iters; ++k) {
    const auto ev = oracle.evaluate(x);
    sum_u += alpha * ev.u_of_x;
    sum_w += alpha;
    const Vector avg = sum_u / sum_w;
    const auto& row = r.trace.rows[static_cast<std::size_t>(k)];
    EXPECT_NEAR(row.d, ev.d_value, 1e-10);
    const Vector gu = prob.G().apply(ev.u_of_x) + prob.g();
    EXPECT_NEAR(row.infeas_last, gu.cwiseMax(0.0).norm(), 1e-10);
    const Vector ga = prob.G().apply(avg) + prob.g();
    EXPECT_NEAR(row.infeas_avg, ga.cwiseMax(0.0).norm(), 1e-10);
    EXPECT_NEAR(row.f_avg, objective_value(prob.objective(), avg), 1e-10);
    x = (x + alpha * ev.d_grad).cwiseMin(0.0);
  }
}

// Fast gradient with the theta sequence, written against the oracle only.
TEST(RunDfgOracle, IteratesAndAveragesMatchIndependentLoop) {
  const auto prob = testing::random_inequality_qp(4, 12, 8);
  const DualOracle oracle(prob);
  const double lip = oracle.lipschitz_dual();
  const long iters = 80;
  std::vector<Vector> observed_y(iters + 1);
  RunOptions opts;
  opts.observer = [&](const IterationRow& row, const DualMethodState&,
                      const StepDetail* detail) {
    if (detail != nullptr) observed_y[static_cast<std::size_t>(row.k)] = detail->y;
  };
  const auto r = run_dfg(oracle, config_for(Method::kDFG, iters), opts);

  Vector x = Vector::Zero(prob.p());
  Vector y = x;
  double theta = 0.0;
  Vector sum_u = Vector::Zero(prob.n());
  double sum_w = 0.0;
  for (long k = 1; k <= iters; ++k) {
    const double theta_k = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    const auto at_y = oracle.evaluate(y);
    EXPECT_LE((observed_y[static_cast<std::size_t>(k)] - y).norm(), 1e-10);
    const Vector x_new = (y + at_y.d_grad / lip).cwiseMin(0.0);
    sum_u += theta_k * at_y.u_of_x;
    sum_w += theta_k;
    const double theta_k1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta_k * theta_k));
    y = x_new + ((theta_k - 1.0) / theta_k1) * (x_new - x);
    x = x_new;
    theta = theta_k;

    const auto& row = r.trace.rows[static_cast<std::size_t>(k)];
    EXPECT_NEAR(row.d, oracle.evaluate(x).d_value, 1e-10);
    const Vector avg = sum_u / sum_w;
    const Vector ga = prob.G().apply(avg) + prob.g();
    EXPECT_NEAR(row.infeas_avg, ga.cwiseMax(0.0).norm(), 1e-10);
  }
  EXPECT_LE((r.state.x - x).norm(), 1e-10);
}

// --- invariants ---------------------------------------------------------------------------

TEST(RunProperty, IteratesStayDualFeasible) {
  for (ConeKind kind : {ConeKind::kNonpos, ConeKind::kNonneg, ConeKind::kSecondOrder}) {
    GeneratorSpec s;
    s.n = 10;
    s.p = 8;
    s.cone = kind;
    s.seed = 5;
    const auto prob = generate_random_problem(s);
    const DualOracle oracle(prob);
    for (Method m : {Method::kDG, Method::kDFG}) {
      RunOptions opts;
      opts.observer = [&](const IterationRow&, const DualMethodState& st,
                          const StepDetail*) {
        EXPECT_LE(dist_dual_cone(prob.cone(), st.x), 1e-12);
      };
      run(oracle, config_for(m, 100), opts);
    }
  }
}

TEST(RunProperty, DgIsMonotoneAscent) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto prob = testing::random_inequality_qp(seed, 10, 7);
    const DualOracle oracle(prob);
    const auto r = run_dg(oracle, config_for(Method::kDG, 300));
    for (std::size_t i = 1; i < r.trace.rows.size(); ++i) {
      EXPECT_GE(r.trace.rows[i].d, r.trace.rows[i - 1].d - 1e-12) << "k=" << i;
    }
  }
}

TEST(RunProperty, StoppedRowSatisfiesRule) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto prob = testing::random_inequality_qp(seed, 10, 7);
    const DualOracle oracle(prob);
    for (Method m : {Method::kDG, Method::kDFG}) {
      SolverConfig c = config_for(m, 20000, true);
      c.epsilon = 1e-3;
      const auto r = run(oracle, c);
      ASSERT_TRUE(r.converged());
      const auto& rows = r.trace.rows;
      const auto& last = rows.back();
      EXPECT_EQ(last.k, *r.stop_last);
      EXPECT_LE(std::abs(last.d - rows[rows.size() - 2].d), c.epsilon * c.epsilon);
      EXPECT_LE(last.infeas_last, c.epsilon);
      for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const bool both = std::abs(rows[i].d - rows[i - 1].d) <= c.epsilon * c.epsilon &&
                          rows[i].infeas_last <= c.epsilon;
        EXPECT_FALSE(both) << "rule held earlier at k=" << i;
      }
    }
  }
}

TEST(RunProperty, RecoveryModeSelectsStopIndex) {
  const auto prob = testing::random_inequality_qp(6, 10, 7);
  const DualOracle oracle(prob);
  SolverConfig c = config_for(Method::kDFG, 20000, true);
  c.epsilon = 1e-3;
  c.recovery = Recovery::kBoth;
  const auto both = run(oracle, c);
  ASSERT_TRUE(both.stop_last && both.stop_avg);
  EXPECT_EQ(both.trace.rows.back().k, std::max(*both.stop_last, *both.stop_avg));
  c.recovery = Recovery::kAverage;
  const auto avg = run(oracle, c);
  EXPECT_EQ(avg.trace.rows.back().k, *both.stop_avg);
  c.recovery = Recovery::kLast;
  const auto last = run(oracle, c);
  EXPECT_EQ(last.trace.rows.back().k, *both.stop_last);
}

TEST(RunDg, AlternatingScheduleUsesBothStepSizes) {
  const auto prob = testing::random_inequality_qp(7, 8, 5);
  const DualOracle oracle(prob);
  const double l = oracle.lipschitz_dual();
  SolverConfig c = config_for(Method::kDG, 20);
  c.lipschitz_g = 3.0 * l;
  RunOptions opts;
  opts.observer = [&](const IterationRow& row, const DualMethodState&,
                      const StepDetail* detail) {
    if (detail == nullptr) return;
    const double expect = ((row.k - 1) % 2 == 0) ? 1.0 / (3.0 * l) : 1.0 / l;
    EXPECT_DOUBLE_EQ(detail->alpha, expect);
  };
  const auto r = run_dg(oracle, c, opts);
  EXPECT_DOUBLE_EQ(r.lipschitz_g, 3.0 * l);
}

// --- R-DFG ---------------------------------------------------------------------------------

TEST(RunRdfg, FixedIntervalEpochs) {
  const auto prob = testing::random_inequality_qp(8, 10, 6);
  const DualOracle oracle(prob);
  SolverConfig c = config_for(Method::kRDFG, 95);
  c.restart_interval = 10;
  RunOptions opts;
  opts.observer = [&](const IterationRow& row, const DualMethodState&,
                      const StepDetail* detail) {
    if (detail == nullptr) return;
    if ((row.k - 1) % 10 == 0) {
      EXPECT_DOUBLE_EQ(detail->theta, 1.0) << "k=" << row.k;
    } else {
      EXPECT_GT(detail->theta, 1.0) << "k=" << row.k;
    }
  };
  const auto r = run_rdfg(oracle, c, opts);
  ASSERT_EQ(r.trace.epochs.size(), 10U);
  for (std::size_t j = 0; j < r.trace.epochs.size(); ++j) {
    const auto& e = r.trace.epochs[j];
    EXPECT_EQ(e.epoch, static_cast<int>(j));
    EXPECT_EQ(e.start_k, static_cast<long>(10 * j));
    EXPECT_EQ(e.end_k, std::min<long>(95, static_cast<long>(10 * (j + 1))));
  }
  EXPECT_EQ(r.trace.rows[25].epoch, 2);
  EXPECT_EQ(r.state.restart_count, 9);
  EXPECT_EQ(r.restart_interval, 10);
}

TEST(RunRdfg, KappaSetsInterval) {
  const auto prob = testing::random_inequality_qp(8, 10, 6);
  const DualOracle oracle(prob);
  SolverConfig c = config_for(Method::kRDFG, 50);
  c.kappa = 5.0;
  c.restart_contraction = 0.5;
  EXPECT_EQ(run_rdfg(oracle, c).restart_interval, 20);
}

TEST(RunRdfg, AdaptiveRestartContractsGap) {
  const auto prob = testing::random_inequality_qp(9, 20, 10);
  const DualOracle oracle(prob);
  // High-accuracy dual value from a long plain DFG run.
  const double f_star = run_dfg(oracle, config_for(Method::kDFG, 20000)).trace.rows.back().d;
  SolverConfig c = config_for(Method::kRDFG, 3000);
  c.adaptive_restart = true;
  c.f_star = f_star;
  const auto r = run_rdfg(oracle, c);
  ASSERT_GE(r.trace.epochs.size(), 2U);
  const double c2 = c.restart_contraction * c.restart_contraction;
  for (std::size_t j = 0; j + 1 < r.trace.epochs.size(); ++j) {
    const auto& e = r.trace.epochs[j];
    if (f_star - e.d_start < 1e-11) break;
    EXPECT_LE(f_star - e.d_end, c2 * (f_star - e.d_start) + 1e-13) << "epoch " << j;
  }
}

// --- regularized DFG ----------------------------------------------------------------

TEST(RunRegularizedDfg, ConstantMomentumAndBudget) {
  const auto prob = testing::random_inequality_qp(10, 10, 6);
  const DualOracle oracle(prob);
  const double l = oracle.lipschitz_dual();
  SolverConfig c = config_for(Method::kRegDFG, 100000);
  c.epsilon = 1e-3;
  c.delta = 1e-2;
  c.dual_radius = 2.0;
  c.stop_at_budget = true;
  const double beta = (std::sqrt(l + 1e-2) - 0.1) / (std::sqrt(l + 1e-2) + 0.1);
  RunOptions opts;
  opts.observer = [&](const IterationRow&, const DualMethodState& st,
                      const StepDetail*) {
    if (st.k == 0) return;
    EXPECT_LE((st.y - st.x - beta * (st.x - st.x_prev)).norm(), 1e-10);
  };
  const auto r = run_regularized_dfg(oracle, c, opts);
  const double budget = regularized_budget(l, 1e-2, 2.0, 1e-3);
  ASSERT_TRUE(r.regularized_budget.has_value());
  EXPECT_DOUBLE_EQ(*r.regularized_budget, budget);
  EXPECT_EQ(r.termination, Termination::kCompleted);
  EXPECT_EQ(r.trace.rows.back().k, static_cast<long>(std::ceil(budget)));
  EXPECT_FALSE(r.dual_radius_estimate.has_value());
  for (const auto& row : r.trace.rows) {
    EXPECT_FALSE(std::isnan(row.d_delta));
    EXPECT_LE(row.d_delta, row.d + 1e-15);
  }
}

TEST(RunRegularizedDfg, DefaultsDeltaFromRadiusEstimate) {
  const auto prob = testing::random_inequality_qp(11, 10, 6);
  const DualOracle oracle(prob);
  SolverConfig c = config_for(Method::kRegDFG, 50);
  c.epsilon = 1e-2;
  const auto r = run_regularized_dfg(oracle, c);
  ASSERT_TRUE(r.dual_radius_estimate.has_value());
  const double radius = *r.dual_radius_estimate;
  ASSERT_GT(radius, 0.0);
  EXPECT_NEAR(*r.delta, 1e-2 / (radius * radius), 1e-15);
}

// --- hybrid ----------------------------------------------------------------------------

TEST(RunHybrid, PhasesAndCompletion) {
  const auto prob = testing::random_inequality_qp(12, 10, 6);
  const DualOracle oracle(prob);
  SolverConfig c = config_for(Method::kHybrid, 1000);
  c.hybrid_k = 15;
  const auto r = run_hybrid(oracle, c);
  ASSERT_EQ(r.trace.rows.size(), 31U);
  EXPECT_EQ(r.termination, Termination::kCompleted);
  for (const auto& row : r.trace.rows) {
    if (row.k >= 1 && row.k <= 15) EXPECT_EQ(row.phase, Phase::kDFG);
    if (row.k > 15) EXPECT_EQ(row.phase, Phase::kDG);
  }
  // The DG phase starts from the DFG iterate x^k.
  const auto dfg = run_dfg(oracle, config_for(Method::kDFG, 15));
  EXPECT_NEAR(r.trace.rows[15].d, dfg.trace.rows.back().d, 1e-12);
}

TEST(RunHybrid, MaxIterCapIsReported) {
  const auto prob = testing::random_inequality_qp(12, 10, 6);
  const DualOracle oracle(prob);
  SolverConfig c = config_for(Method::kHybrid, 20);
  c.hybrid_k = 15;
  const auto r = run_hybrid(oracle, c);
  EXPECT_EQ(r.trace.rows.back().k, 20);
  EXPECT_EQ(r.termination, Termination::kMaxIter);
}

// --- accuracy ---------------------------------------------------------------------------

TEST(RunProperty, DfgBeatsDgOnDualGap) {
  auto best_gap = [](const RunResult& r, double f_star) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : r.trace.rows) best = std::min(best, f_star - row.d);
    return best;
  };
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto prob = testing::random_equality_qp(seed, 20, 18);
    const DualOracle oracle(prob);
    const double f_star = reference_solution(prob).f_star;
    const auto dg = run_dg(oracle, config_for(Method::kDG, 60));
    const auto dfg = run_dfg(oracle, config_for(Method::kDFG, 60));
    EXPECT_LT(best_gap(dfg, f_star), best_gap(dg, f_star)) << "seed " << seed;
  }
}

}  // namespace
}  // namespace dfo
