#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ptx/evolution.hpp"
#include "ptx/trial.hpp"

using namespace ptx;

namespace {

NetworkGenome midpoint_genome(std::size_t n = 10) {
  NetworkGenome g;
  g.genes.assign(genome_length(n), 0.5);
  return g;
}

NetworkGenome random_test_genome(std::uint64_t seed) {
  Rng rng(seed);
  return random_genome(rng, 10, false);
}

std::vector<double> trajectory(const TimeSeries& log) {
  std::vector<double> out;
  for (const char* c : {"x", "y", "alpha"}) {
    auto col = log.column(c);
    out.insert(out.end(), col.begin(), col.end());
  }
  return out;
}

}  // namespace

TEST(Fitness, ConstantSeries) {
  std::vector<double> d(37, 4.0);
  EXPECT_DOUBLE_EQ(fitness_from_trajectory(d), 4.0);
}

TEST(Fitness, InitialSampleHasNoWeight) {
  EXPECT_EQ(fitness_from_trajectory(std::vector<double>{123.0, 0.0, 0.0, 0.0}), 0.0);
}

TEST(Fitness, HandEvaluation) {
  EXPECT_NEAR(fitness_from_trajectory(std::vector<double>{9, 9, 1}), 11.0 / 3.0, 1e-15);
}

TEST(Fitness, SingleSampleIsAnError) {
  EXPECT_THROW(fitness_from_trajectory(std::vector<double>{1.0}), ConfigError);
}

TEST(Fitness, ScaleInvariantWeighting) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 20);
  std::vector<double> d(500);
  for (auto& v : d) v = u(rng);
  double num = 0, den = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double t = 0.01 * static_cast<double>(k);
    num += d[k] * t;
    den += t;
  }
  EXPECT_NEAR(fitness_from_trajectory(d), num / den, 1e-12);
}

TEST(ProbeLights, ClockPositions) {
  auto lights = probe_lights_clock(3.0, 12);
  ASSERT_EQ(lights.size(), 12u);
  EXPECT_NEAR(lights[11].x, 0.0, 1e-12);
  EXPECT_NEAR(lights[11].y, 3.0, 1e-12);
  EXPECT_NEAR(lights[5].x, 0.0, 1e-12);
  EXPECT_NEAR(lights[5].y, -3.0, 1e-12);
  EXPECT_NEAR(lights[2].x, 3.0, 1e-12);
  EXPECT_NEAR(lights[2].y, 0.0, 1e-12);
  for (const auto& l : lights) EXPECT_NEAR(std::hypot(l.x, l.y), 3.0, 1e-12);
}

TEST(RunTrial, StationaryRobotScoresSquaredDistance) {
  TrialConfig cfg;
  cfg.light = LightPosition{0.0, 3.0};
  cfg.log = true;
  auto r = run_trial(midpoint_genome(), cfg);
  ASSERT_TRUE(r.fitness);
  EXPECT_NEAR(r.fitness->value, 9.0, 1e-9);
  EXPECT_EQ(r.final_state, cfg.initial_state);
  for (double m : r.log->column("m_left")) EXPECT_EQ(m, 0.0);
}

TEST(RunTrial, LogShapeAndFitnessAgree) {
  TrialConfig cfg;
  cfg.light = LightPosition{2.0, -1.0};
  cfg.log = true;
  cfg.duration = 3.0;
  auto g = random_test_genome(8);
  auto r = run_trial(g, cfg);
  ASSERT_TRUE(r.log);
  EXPECT_EQ(r.log->rows(), 301u);
  EXPECT_EQ(r.log->columns().size(), 22u);
  const auto xs = r.log->column("x");
  const auto ys = r.log->column("y");
  std::vector<double> d2;
  for (std::size_t k = 0; k < xs.size(); ++k) d2.push_back(std::pow(xs[k] - 2.0, 2) + std::pow(ys[k] + 1.0, 2));
  EXPECT_NEAR(r.fitness->value, fitness_from_trajectory(d2), 1e-12);
  EXPECT_NEAR(r.log->column("t").back(), 3.0, 1e-12);
  EXPECT_EQ(xs.back(), r.final_state.x);
}

TEST(RunTrial, HalvedInputWithDoubledGainIsBitIdentical) {
  auto g = random_test_genome(17);
  TrialConfig a;
  a.light = LightPosition{-2.0, 2.0};
  a.log = true;
  TrialConfig b = a;
  b.interference.kind = InterferenceKind::Null;
  b.interference.lambda = 0.5;
  b.network.omega_input = 10.0;
  auto ra = run_trial(g, a);
  auto rb = run_trial(g, b);
  EXPECT_EQ(trajectory(*ra.log), trajectory(*rb.log));
  EXPECT_EQ(ra.fitness->value, rb.fitness->value);

  // Without the gain change the halved input does change behaviour.
  b.network.omega_input = 5.0;
  EXPECT_NE(trajectory(*run_trial(g, b).log), trajectory(*ra.log));
}

TEST(RunTrial, IdentityPerturbation) {
  auto g = random_test_genome(4);
  TrialConfig a;
  a.log = true;
  a.interference.kind = InterferenceKind::Squared;
  a.interference.lambda = 0.5;
  TrialConfig b = a;
  b.perturbation = PerturbationSpec{1.0, 1.0, true, true, std::nullopt, std::nullopt};
  EXPECT_EQ(run_trial(g, a).log->to_string(), run_trial(g, b).log->to_string());
}

TEST(RunTrial, Deterministic) {
  auto g = random_test_genome(4);
  TrialConfig cfg;
  cfg.log = true;
  cfg.interference.kind = InterferenceKind::Sinusoidal;
  cfg.interference.lambda = 0.5;
  EXPECT_EQ(run_trial(g, cfg).log->to_string(), run_trial(g, cfg).log->to_string());
}

TEST(RunTrial, InterferenceIrrelevantWithoutMixing) {
  auto g = random_test_genome(23);
  TrialConfig a;
  a.log = true;
  a.light = LightPosition{1.0, 2.5};
  TrialConfig b = a;
  b.interference.kind = InterferenceKind::Sinusoidal;
  auto ra = run_trial(g, a);
  auto rb = run_trial(g, b);
  EXPECT_EQ(trajectory(*ra.log), trajectory(*rb.log));
  EXPECT_NE(ra.log->column("psi_left")[0], rb.log->column("psi_left")[0]);
}

TEST(RunTrial, ZeroScriptEqualsDarkWorld) {
  auto g = random_test_genome(31);
  TrialConfig dark;
  dark.light.reset();
  dark.log = true;
  TrialConfig scripted = dark;
  scripted.perturbation.script_left = StimulusScript{};
  scripted.perturbation.script_right = StimulusScript{};
  auto a = run_trial(g, dark);
  auto b = run_trial(g, scripted);
  EXPECT_FALSE(a.fitness);
  EXPECT_EQ(a.log->to_string(), b.log->to_string());
  for (double s : a.log->column("s_left")) EXPECT_EQ(s, 0.0);
}

TEST(RunTrial, DisabledSensorReadsZero) {
  auto g = random_test_genome(6);
  TrialConfig cfg;
  cfg.log = true;
  cfg.perturbation.sensor_enabled_left = false;
  auto r = run_trial(g, cfg);
  for (double s : r.log->column("s_left")) EXPECT_EQ(s, 0.0);
}

TEST(RunTrial, InterferenceLesionZeroesPsi) {
  auto g = random_test_genome(6);
  TrialConfig cfg;
  cfg.log = true;
  cfg.interference.kind = InterferenceKind::Squared;
  cfg.interference.lambda = 0.5;
  cfg.perturbation.interference_gain_right = 0.0;
  auto r = run_trial(g, cfg);
  for (double v : r.log->column("psi_right")) EXPECT_EQ(v, 0.0);
  const auto ml = r.log->column("m_left");
  const auto pl = r.log->column("psi_left");
  for (std::size_t k = 0; k < ml.size(); ++k) EXPECT_EQ(pl[k], ml[k] * ml[k]);
}

TEST(RunTrial, DisplacementBoundedPerStep) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrialConfig cfg;
    cfg.log = true;
    auto r = run_trial(random_test_genome(seed), cfg);
    const auto xs = r.log->column("x");
    const auto ys = r.log->column("y");
    for (std::size_t k = 1; k < xs.size(); ++k)
      EXPECT_LE(std::hypot(xs[k] - xs[k - 1], ys[k] - ys[k - 1]), 2 * cfg.dt() + 1e-15);
  }
}

TEST(RunTrial, PsiUsesPreviousTickMotors) {
  auto g = random_test_genome(12);
  TrialConfig cfg;
  cfg.log = true;
  cfg.interference.kind = InterferenceKind::Squared;
  cfg.interference.lambda = 0.3;
  auto r = run_trial(g, cfg);
  const auto ml = r.log->column("m_left");
  const auto pl = r.log->column("psi_left");
  const auto sp = r.log->column("sprime_left");
  const auto s = r.log->column("s_left");
  EXPECT_EQ(ml[0], 0.0);
  for (std::size_t k = 0; k < ml.size(); ++k) {
    EXPECT_EQ(pl[k], ml[k] * ml[k]);
    EXPECT_NEAR(sp[k], 0.3 * pl[k] + 0.7 * s[k], 1e-15);
  }
}

TEST(RunTrial, SinusoidPhaseAdvancesWithMotors) {
  // Motors stay at zero, so psi follows (sin(0.8 t) + 1) / 2.
  TrialConfig cfg;
  cfg.log = true;
  cfg.interference.kind = InterferenceKind::Sinusoidal;
  cfg.interference.lambda = 0.5;
  auto r = run_trial(midpoint_genome(), cfg);
  const auto t = r.log->column("t");
  const auto psi = r.log->column("psi_left");
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_NEAR(psi[k], (std::sin(0.8 * t[k]) + 1) / 2, 1e-9);
}

TEST(RunTrial, NonFiniteActivationRaisesNumericError) {
  TrialConfig cfg;
  // A constant scripted reading of 2 drives the input past the double range.
  cfg.network.omega_input = 1e308;
  cfg.perturbation.script_left = StimulusScript{.plateau = 2.0};
  EXPECT_THROW(run_trial(random_test_genome(2), cfg), NumericError);
}

TEST(RunTrial, RejectsBadConfiguration) {
  TrialConfig cfg;
  cfg.duration = 0.015;
  EXPECT_THROW(run_trial(midpoint_genome(), cfg), ConfigError);
  cfg = {};
  EXPECT_THROW(run_trial(midpoint_genome(6), cfg), ConfigError);
  cfg.perturbation.interference_gain_left = -1;
  EXPECT_THROW(run_trial(midpoint_genome(), cfg), ConfigError);
}

TEST(StimulusScript, Shape) {
  StimulusScript s{0.1, 8.0, 0.5, 2.0, 1.0, 0.6, 15.0};
  EXPECT_EQ(s.value(0.0), 0.1);
  EXPECT_EQ(s.value(7.99), 0.1);
  EXPECT_NEAR(s.value(8.25), 1.05, 1e-12);
  EXPECT_NEAR(s.value(8.5), 2.0, 1e-12);
  EXPECT_NEAR(s.value(9.0), 1.3, 1e-12);
  EXPECT_EQ(s.value(12.0), 0.6);
  EXPECT_EQ(s.value(15.0), 0.1);
  StimulusScript step{0.0, 2.0, 0.0, 1.0, 0.0, 1.0};
  EXPECT_EQ(step.value(2.0), 1.0);
  EXPECT_EQ(step.value(1000.0), 1.0);
}

TEST(StimulusScript, TimesMustLieInsideTrial) {
  StimulusScript s;
  s.onset = 12.0;
  EXPECT_THROW(s.validate(10.0), ConfigError);
  s.onset = 2.0;
  s.end = 11.0;
  EXPECT_THROW(s.validate(10.0), ConfigError);
  s.end = 9.0;
  EXPECT_NO_THROW(s.validate(10.0));
}
