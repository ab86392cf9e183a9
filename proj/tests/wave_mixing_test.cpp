#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "deltamix/lindblad.hpp"
#include "deltamix/validate.hpp"
#include "deltamix/wave_mixing.hpp"

namespace deltamix {
namespace {

constexpr double kPi = std::numbers::pi;
const EffectiveLinewidths kFigure{0.5, 2.0};

TEST(Xi, ResonanceWithControl5) {
  EXPECT_EQ(xi(kFigure, 0.0, 5.0).xi, Complex(7.25, 0.0));
}

TEST(Xi, ResonanceWithControl10) {
  EXPECT_EQ(xi(kFigure, 0.0, 10.0).xi, Complex(26.0, 0.0));
}

TEST(Xi, DetunedWithoutControl) {
  EXPECT_EQ(xi(EffectiveLinewidths{1.0, 1.0}, 1.0, 0.0).xi, Complex(0.0, 2.0));
}

TEST(Xi, ConjugateUnderDetuningReversal) {
  for (double dd : {0.3, 1.0, 4.2}) {
    EXPECT_EQ(xi(kFigure, -dd, 5.0).xi, std::conj(xi(kFigure, dd, 5.0).xi));
  }
}

TEST(FirstOrder, VanishesWithoutField) {
  DriveConfiguration c;
  c.control_c = {5.0, 0.0};
  c.drive_d = {1.0, 0.2};
  c.generated_td = {1.0, 0.2 + kPi};
  EXPECT_NEAR(std::abs(first_order_coherences(c, kFigure).first), 0.0, 1e-16);
}

TEST(FirstOrder, FigureResonance) {
  DriveConfiguration c;
  c.control_c = {5.0, 0.0};
  c.drive_d = {1.0, 0.0};
  const auto [r21, r31] = first_order_coherences(c, kFigure);
  EXPECT_NEAR(std::abs(r21 - Complex(0.0, 2.0 / 14.5)), 0.0, 1e-15);
  EXPECT_EQ(r31, Complex(0));
}

TEST(FirstOrder, DetuningReversalConjugates) {
  DriveConfiguration c;
  c.control_c = {5.0, 0.0};
  c.drive_d = {1.0, 0.0};
  c.signal_s = {0.7, 0.0};
  for (double dd : {0.5, 2.0, 7.0}) {
    c.delta_d = dd;
    const auto plus = first_order_coherences(c, kFigure);
    c.delta_d = -dd;
    const auto minus = first_order_coherences(c, kFigure);
    EXPECT_NEAR(std::abs(minus.first + std::conj(plus.first)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(minus.second + std::conj(plus.second)), 0.0, 1e-15);
  }
}

TEST(SecondOrder, NoMixingWithoutControl) {
  DriveConfiguration c;
  c.drive_d = {1.0, 0.3};
  c.signal_s = {2.0, -0.4};
  const auto [r21, r31] = second_order_coherences(c, kFigure);
  EXPECT_EQ(r21, Complex(0));
  EXPECT_EQ(r31, Complex(0));
}

TEST(SecondOrder, FigureResonance) {
  DriveConfiguration c;
  c.control_c = {5.0, 0.0};
  c.drive_d = {1.0, 0.0};
  const auto [r21, r31] = second_order_coherences(c, kFigure);
  EXPECT_NEAR(std::abs(r31 - Complex(-5.0 / 29.0, 0.0)), 0.0, 1e-15);
  EXPECT_EQ(r21, Complex(0));
}

TEST(SecondOrder, LinearInEachWeakField) {
  DriveConfiguration c;
  c.control_c = {5.0, 0.3};
  c.drive_d = {1.0, 0.1};
  c.signal_s = {0.5, -0.8};
  c.delta_d = 1.3;
  const auto base = second_order_coherences(c, kFigure);
  c.drive_d.magnitude *= 2.0;
  const auto doubled = second_order_coherences(c, kFigure);
  EXPECT_NEAR(std::abs(doubled.second - 2.0 * base.second), 0.0, 1e-15);
  EXPECT_EQ(doubled.first, base.first);
}

TEST(Coherences, CommonPhaseCovariance) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-kPi, kPi), det(-10, 10);
  for (int trial = 0; trial < 50; ++trial) {
    DriveConfiguration c;
    c.control_c = {5.0, u(rng)};
    c.drive_d = {1.0, u(rng)};
    c.signal_s = {0.8, u(rng)};
    c.delta_d = det(rng);
    const double delta = u(rng);
    DriveConfiguration shifted = c;
    shifted.drive_d.phase += delta;
    shifted.signal_s.phase += delta;
    const Complex factor = std::polar(1.0, -delta);
    const auto a1 = first_order_coherences(c, kFigure), b1 = first_order_coherences(shifted, kFigure);
    const auto a2 = second_order_coherences(c, kFigure), b2 = second_order_coherences(shifted, kFigure);
    EXPECT_NEAR(std::abs(b1.first - factor * a1.first), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(b1.second - factor * a1.second), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(b2.first - factor * a2.first), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(b2.second - factor * a2.second), 0.0, 1e-14);
  }
}

TEST(Coherences, FiniteAcrossDenseDetuningScan) {
  DriveConfiguration c;
  c.control_c = {5.0, 0.0};
  c.drive_d = {1.0, 0.0};
  c.signal_s = {1.0, 0.0};
  for (const auto& lw : {kFigure, EffectiveLinewidths{0.01, 0.02}}) {
    for (int i = 0; i <= 100000; ++i) {
      c.delta_d = -20.0 + 40.0 * i / 100000.0;
      const auto [a, b] = first_order_coherences(c, lw);
      const auto [e, f] = second_order_coherences(c, lw);
      ASSERT_TRUE(std::isfinite(std::abs(a)) && std::isfinite(std::abs(b)));
      ASSERT_TRUE(std::isfinite(std::abs(e)) && std::isfinite(std::abs(f)));
      ASSERT_LT(std::abs(a) + std::abs(b) + std::abs(e) + std::abs(f), 1e4);
    }
  }
}

TEST(Coherences, MatchLindbladOrderExtraction) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-kPi, kPi), det(-10, 10);
  const auto rates = RelaxationRates(3.0, 1.0);
  const auto lw = effective_linewidths(rates);
  const double eps[] = {1e-3};
  for (int trial = 0; trial < 30; ++trial) {
    DriveConfiguration c;
    c.control_c = {trial % 2 ? 10.0 : 5.0, u(rng)};
    c.drive_d = {1.0, u(rng)};
    c.signal_s = {1.0, u(rng)};
    c.delta_d = det(rng);
    const auto oracle = extract_weak_field_orders(c, rates, eps);
    EXPECT_LE(coherence_deviation(closed_form_coherences(c, lw), oracle), 1e-4)
        << "delta_d=" << c.delta_d;
  }
}

TEST(Coherences, MatchOracleWithDephasing) {
  const auto rates = RelaxationRates(2.0, 0.5, 0.7, 1.3);
  const auto lw = effective_linewidths(rates);
  DriveConfiguration c;
  c.control_c = {7.0, 0.9};
  c.drive_d = {1.0, -0.4};
  c.signal_s = {2.0, 2.2};
  c.delta_d = -3.1;
  const double eps[] = {1e-3, 5e-4, 2.5e-4};
  const auto oracle = extract_weak_field_orders(c, rates, eps);
  EXPECT_LE(oracle.fit_residual, 1e-6);
  EXPECT_LE(coherence_deviation(closed_form_coherences(c, lw), oracle), 1e-8);
}

TEST(WeakDriveBound, Reported) {
  DriveConfiguration c;
  c.control_c = {5.0, 0.0};
  c.drive_d = {0.5, 0.0};
  c.signal_s = {0.5, 0.0};
  EXPECT_FALSE(weak_drive_bound_exceeded(c));
  c.drive_d.magnitude = 5.0;
  EXPECT_TRUE(weak_drive_bound_exceeded(c));
}

}  // namespace
}  // namespace deltamix
