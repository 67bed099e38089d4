#include <gtest/gtest.h>

#include <cmath>

#include "qdepth/experiment.hpp"
#include "qdepth/optimizer.hpp"

using namespace qdepth;

namespace {

double sum_of_squares(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return s;
}

OptimizerConfig config(double eta, double lambda, int iterations) {
  OptimizerConfig c;
  c.eta = eta;
  c.lambda = lambda;
  c.iterations = iterations;
  return c;
}

}  // namespace

TEST(FdGradient, Quadratic) {
  const std::vector<double> x{1.0, -2.0};
  const auto g = fd_gradient(sum_of_squares, x, 1e-5);
  EXPECT_NEAR(g[0], 2.0, 1e-8);
  EXPECT_NEAR(g[1], -4.0, 1e-8);
}

TEST(FdGradient, SignFollowsSlope) {
  const Objective f = [](std::span<const double> x) { return 3.0 * x[0]; };
  EXPECT_NEAR(fd_gradient(f, std::vector<double>{0.5}, 1e-3)[0], 3.0, 1e-12);
}

TEST(FdGradient, ConstantIsZero) {
  const Objective f = [](std::span<const double>) { return 4.2; };
  for (const double g : fd_gradient(f, std::vector<double>{1.0, 2.0, 3.0}, 1e-3)) EXPECT_EQ(g, 0.0);
}

TEST(FdGradient, JobsDoNotChangeResult) {
  const Objective f = [](std::span<const double> x) {
    return std::sin(x[0]) * std::cos(x[1]) + x[2] * x[2] * x[0];
  };
  const std::vector<double> x{0.3, -0.7, 1.1};
  const auto a = fd_gradient(f, x, 1e-3, 1);
  const auto b = fd_gradient(f, x, 1e-3, 3);
  EXPECT_EQ(a, b);
}

TEST(FdGradient, QaoaMatchesRichardson) {
  const QaoaProblem problem(random_graph(3, 3, {0.1, 1.0}, 1), NoiseModel(), ScaleFactor(),
                            experiment_integrator());
  const ControlSchedule s0 = ControlSchedule::qaoa_uniform(1, 0.1);
  const Objective f = problem.objective(s0.generators());
  const std::vector<double> x{0.1, 0.15};
  const auto coarse = fd_gradient(f, x, 1e-3);
  const auto fine = fd_gradient(f, x, 1e-4);
  for (std::size_t i = 0; i < x.size(); ++i) {
    // Truncation error of a central difference is O(eps^2); the magnitude of
    // the third derivative at scale 6 is well below 1e3.
    EXPECT_NEAR(coarse[i], fine[i], 1e3 * 1e-6) << i;
  }
}

TEST(SoftThreshold, ThreeBranches) {
  EXPECT_NEAR(soft_threshold(0.5, 0.2), 0.3, 1e-15);
  EXPECT_EQ(soft_threshold(-0.1, 0.2), 0.0);
  EXPECT_FALSE(std::signbit(soft_threshold(-0.1, 0.2)));
  EXPECT_NEAR(soft_threshold(-0.5, 0.2), -0.3, 1e-15);
  EXPECT_EQ(soft_threshold(0.75, 0.25), 0.5);
  EXPECT_EQ(soft_threshold(-0.75, 0.25), -0.5);
  EXPECT_EQ(soft_threshold(0.2, 0.2), 0.0);
  EXPECT_EQ(soft_threshold(-0.2, 0.2), 0.0);
  EXPECT_EQ(soft_threshold(0.3, 0.0), 0.3);
}

TEST(Steps, GdAndPg) {
  const std::vector<double> x{0.5, -0.5, 0.01};
  const std::vector<double> zero(3, 0.0);
  EXPECT_EQ(gd_step(x, zero, 0.1), x);
  const std::vector<double> g{1.0, -2.0, 0.5};
  EXPECT_EQ(pg_step(x, g, 0.1, 0.0), gd_step(x, g, 0.1));
  for (const double v : pg_step(x, g, 0.1, 100.0)) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(count_zeros(std::vector<double>{0.0, 1.0, -0.0, 2.0}), 2);
  EXPECT_EQ(l1_norm(std::vector<double>{1.0, -2.0, 0.5}), 3.5);
}

TEST(RunPg, ZeroIterationsKeepsStart) {
  const Trajectory t = run_pg(sum_of_squares, {1.0, 2.0}, config(0.1, 0.5, 0));
  ASSERT_EQ(t.points.size(), 1U);
  EXPECT_EQ(t.points[0].x, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(t.points[0].objective, 5.0);
  EXPECT_EQ(t.points[0].regularized, 5.0 + 0.5 * 3.0);
}

TEST(RunPg, LambdaZeroIsGd) {
  const QaoaProblem problem(random_graph(3, 3, {0.1, 1.0}, 2),
                            NoiseModel(NoiseKind::Relaxation, 0.2), ScaleFactor(),
                            experiment_integrator());
  const Objective f = problem.objective(ControlSchedule::qaoa_uniform(2, 0.1).generators());
  const OptimizerConfig cfg = config(0.008, 0.0, 15);
  const Trajectory pg = run_pg(f, {0.1, 0.1, 0.1, 0.1}, cfg);
  const Trajectory gd = run_gd(f, {0.1, 0.1, 0.1, 0.1}, cfg);
  ASSERT_EQ(pg.points.size(), gd.points.size());
  for (std::size_t k = 0; k < pg.points.size(); ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(pg.points[k].x[i], gd.points[k].x[i], 1e-12);
    }
  }
}

TEST(RunPg, OneDimensionalLasso) {
  for (const double a : {1.3, -0.7, 0.2, -0.05}) {
    for (const double lambda : {0.0, 0.1, 0.5}) {
      const Objective f = [a](std::span<const double> x) { return 0.5 * (x[0] - a) * (x[0] - a); };
      for (const double start : {-2.0, 0.0, 3.0}) {
        const Trajectory t = run_pg(f, {start}, config(0.1, lambda, 400));
        EXPECT_NEAR(t.last().x[0], soft_threshold(a, lambda), 1e-6)
            << "a=" << a << " lambda=" << lambda << " start=" << start;
      }
    }
  }
}

TEST(RunPg, FixedPointStaysPut) {
  // x = 0 with |gradient| <= lambda: the proximal step maps 0 back to 0.
  const Objective f = [](std::span<const double> x) { return 0.3 * x[0] + x[1] * x[1]; };
  const Trajectory t = run_pg(f, {0.0, 0.0}, config(0.1, 0.5, 20));
  for (const auto& p : t.points) {
    EXPECT_EQ(p.x[0], 0.0);
    EXPECT_EQ(p.zero_count, 2);
  }
}

TEST(RunPg, ParameterCanReEnter) {
  // Gradient magnitude 1 exceeds lambda = 0.5, so a zero does not stay frozen.
  const Objective f = [](std::span<const double> x) { return -x[0]; };
  const Trajectory t = run_pg(f, {0.0}, config(0.1, 0.5, 3));
  EXPECT_GT(t.last().x[0], 0.0);
}

TEST(RunPg, LargeLambdaPrunesQaoa) {
  const QaoaProblem problem(random_graph(3, 3, {0.1, 1.0}, 3),
                            NoiseModel(NoiseKind::Relaxation, 0.2), ScaleFactor(),
                            experiment_integrator());
  const Objective f = problem.objective(ControlSchedule::qaoa_uniform(2, 0.1).generators());
  const Trajectory t = run_pg(f, {0.1, 0.1, 0.1, 0.1}, config(0.008, 1e4, 3));
  EXPECT_EQ(t.last().zero_count, 4);
}

TEST(RunPg, FailureKeepsPartialTrajectory) {
  int calls = 0;
  const Objective f = [&calls](std::span<const double> x) {
    if (++calls > 12) throw EvaluationFailed("boom");
    return x[0] * x[0];
  };
  const Trajectory t = run_pg(f, {1.0}, config(0.1, 0.0, 10));
  EXPECT_FALSE(t.ok());
  EXPECT_GE(t.points.size(), 1U);
  EXPECT_LT(t.points.size(), 11U);
  EXPECT_NE(t.failure->find("boom"), std::string::npos);
}

TEST(OptimizerConfigValidation, Rejections) {
  EXPECT_THROW(config(0.0, 0.0, 1).validate(), std::invalid_argument);
  EXPECT_THROW(config(0.1, -1.0, 1).validate(), std::invalid_argument);
  EXPECT_THROW(config(0.1, 0.0, -1).validate(), std::invalid_argument);
  OptimizerConfig c = config(0.1, 0.0, 10);
  c.hybrid = HybridSplit{6, 5};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.hybrid = HybridSplit{5, 5};
  EXPECT_NO_THROW(c.validate());
}

TEST(RunHybrid, ZeroProximalIterationsIsPlainGd) {
  const Objective f = [](std::span<const double> x) {
    return std::pow(x[0] - 1.0, 2) + 0.5 * std::pow(x[1] + 0.5, 2);
  };
  const Compactor identity = [&f](std::span<const double> x) {
    return CompactedProblem{f, std::vector<double>(x.begin(), x.end())};
  };
  OptimizerConfig c = config(0.05, 0.3, 20);
  c.hybrid = HybridSplit{0, 20};
  const HybridResult h = run_hybrid(f, identity, {0.2, 0.2}, c);
  const Trajectory gd = run_gd(f, {0.2, 0.2}, config(0.05, 0.0, 20));
  ASSERT_TRUE(h.ok());
  EXPECT_EQ(h.vanilla_phase.last().x, gd.last().x);
}

TEST(RunHybrid, CompactsThenDescends) {
  // Coordinate 1 has a weak pull and gets pruned; phase 2 works on the rest.
  const Objective f = [](std::span<const double> x) {
    return std::pow(x[0] - 1.0, 2) + 0.01 * std::pow(x[1] - 0.1, 2);
  };
  std::vector<std::size_t> kept;
  const Compactor compact = [&f, &kept](std::span<const double> x) {
    kept.clear();
    std::vector<double> reduced;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0.0) {
        kept.push_back(i);
        reduced.push_back(x[i]);
      }
    }
    const std::vector<double> full(x.begin(), x.end());
    Objective g = [f, full, kept = kept](std::span<const double> y) {
      std::vector<double> z = full;
      for (std::size_t j = 0; j < kept.size(); ++j) z[kept[j]] = y[j];
      return f(z);
    };
    return CompactedProblem{g, reduced};
  };
  OptimizerConfig c = config(0.1, 0.5, 120);
  c.hybrid = HybridSplit{60, 60};
  const HybridResult h = run_hybrid(f, compact, {0.5, 0.5}, c);
  ASSERT_TRUE(h.ok());
  EXPECT_EQ(h.pg_phase.points.size(), 61U);
  EXPECT_EQ(h.vanilla_phase.points.size(), 61U);
  EXPECT_EQ(h.pg_phase.last().x[1], 0.0);
  ASSERT_EQ(h.vanilla_phase.last().x.size(), 1U);
  EXPECT_NEAR(h.vanilla_phase.last().x[0], 1.0, 1e-6);
  for (std::size_t k = 1; k < h.vanilla_phase.points.size(); ++k) {
    EXPECT_LE(h.vanilla_phase.points[k].objective, h.vanilla_phase.points[k - 1].objective + 1e-12);
    EXPECT_EQ(h.vanilla_phase.points[k].zero_count, h.vanilla_phase.points[0].zero_count);
  }
}
