// Copyright 2026 The KBC Privacy Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kbc/inference.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gtest/gtest.h"
#include "oracles.h"

namespace kbc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GameParams Params(double sx = 1.0) {
  return GameParams(0.5, 0.5, Population::Continuum(), sx, 1.0);
}

// Posterior over x_i from the prior N(s, sx) and the noise density of the
// residual theta~ - kappa x - (1 - kappa) y.
testing::Moments GridPosterior(double z, double y, double kappa,
                               const NoiseSpec& noise, double s, double sx) {
  auto f = [&](double x) {
    return testing::normal_pdf(x, s, sx) *
           noise.density(z - kappa * x - (1 - kappa) * y);
  };
  double lo = s - 12 * std::sqrt(sx), hi = s + 12 * std::sqrt(sx);
  if (noise.family() == NoiseFamily::kUniform) {
    const double a = noise.half_width() / kappa;
    const double x0 = (z - (1 - kappa) * y) / kappa;
    lo = std::max(lo, x0 - a);
    hi = std::min(hi, x0 + a);
  }
  return testing::density_moments(f, lo, hi, 200000);
}

TEST(InvertActionTest, Examples) {
  EXPECT_DOUBLE_EQ(invert_action(2.0, 1.0, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(invert_action(1.3, 1.3, 0.2), 1.3);
  EXPECT_DOUBLE_EQ(invert_action(-0.7, 5.0, 1.0), -0.7);
  try {
    invert_action(1.0, 0.0, 0.0);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "action carries no private-signal information");
  }
}

TEST(ObserverPosteriorTest, GaussianExample) {
  const Belief b =
      observer_posterior(1.0, 0.0, 0.5, NoiseSpec::Gaussian(1.0), 0.0, Params());
  EXPECT_EQ(b.representation, BeliefRepresentation::kGaussian);
  EXPECT_NEAR(b.mean, 0.4, 1e-15);
  EXPECT_NEAR(b.variance, 0.8, 1e-15);
  const auto m = GridPosterior(1.0, 0.0, 0.5, NoiseSpec::Gaussian(1.0), 0, 1);
  EXPECT_NEAR(b.mean, m.mean, 1e-6);
  EXPECT_NEAR(b.variance, m.variance, 1e-6);
}

TEST(ObserverPosteriorTest, ZeroNoiseInvertsExactly) {
  for (NoiseFamily f : {NoiseFamily::kGaussian, NoiseFamily::kUniform,
                        NoiseFamily::kTwoPoint}) {
    const Belief b = observer_posterior(2.0, 1.0, 0.5, NoiseSpec::Make(f, 0.0),
                                        0.0, Params());
    EXPECT_EQ(b.representation, BeliefRepresentation::kDegenerate);
    EXPECT_EQ(b.mean, 3.0);
    EXPECT_EQ(b.variance, 0.0);
    EXPECT_EQ(b.entropy, -kInf);
  }
}

TEST(ObserverPosteriorTest, HugeNoiseReturnsPrior) {
  const Belief b = observer_posterior(1.0, 0.0, 0.5, NoiseSpec::Gaussian(1e8),
                                      0.3, Params(2.0));
  EXPECT_NEAR(b.mean, 0.3, 1e-3);
  EXPECT_NEAR(b.variance, 2.0, 1e-3);
}

TEST(ObserverPosteriorTest, GaussianMatchesQuadratureOnGrid) {
  for (double z : {-2.0, 0.5, 3.0}) {
    for (double kappa : {0.2, 0.7}) {
      for (double nu : {0.1, 1.0, 5.0}) {
        const NoiseSpec noise = NoiseSpec::Gaussian(nu);
        const Belief b = observer_posterior(z, 0.4, kappa, noise, -0.5,
                                            Params(1.5));
        const auto m = GridPosterior(z, 0.4, kappa, noise, -0.5, 1.5);
        EXPECT_NEAR(b.mean, m.mean, 1e-6);
        EXPECT_NEAR(b.variance, m.variance, 1e-6);
      }
    }
  }
}

TEST(ObserverPosteriorTest, UniformMatchesQuadrature) {
  for (double z : {-1.0, 0.0, 2.5}) {
    for (double nu : {0.2, 1.0, 4.0}) {
      const NoiseSpec noise = NoiseSpec::Uniform(nu);
      const Belief b = observer_posterior(z, 0.0, 0.5, noise, 0.0, Params());
      EXPECT_EQ(b.representation, BeliefRepresentation::kGrid);
      const auto m = GridPosterior(z, 0.0, 0.5, noise, 0.0, 1.0);
      EXPECT_NEAR(b.mean, m.mean, 1e-6);
      EXPECT_NEAR(b.variance, m.variance, 1e-6);
    }
  }
}

TEST(ObserverPosteriorTest, TwoPointIsDiscrete) {
  const NoiseSpec noise = NoiseSpec::TwoPoint(1.0, 1.0, 0.5);
  const double z = 0.7;
  const Belief b = observer_posterior(z, 0.0, 0.5, noise, 0.0, Params());
  EXPECT_EQ(b.representation, BeliefRepresentation::kDiscrete);
  // Two candidate signals, weighted by prior density times atom mass.
  const double x1 = (z - noise.high_atom()) / 0.5;
  const double x2 = (z - noise.low_atom()) / 0.5;
  const double w1 = 0.5 * testing::normal_pdf(x1, 0, 1);
  const double w2 = 0.5 * testing::normal_pdf(x2, 0, 1);
  const double mean = (w1 * x1 + w2 * x2) / (w1 + w2);
  EXPECT_NEAR(b.mean, mean, 1e-12);
  EXPECT_NEAR(b.variance,
              (w1 * (x1 - mean) * (x1 - mean) + w2 * (x2 - mean) * (x2 - mean)) /
                  (w1 + w2),
              1e-12);
}

TEST(NumericPosteriorTest, RecoversConjugateUpdate) {
  const Belief b = numeric_posterior(
      1.0, 2.0, [](double x) { return -0.5 * (3.0 - x) * (3.0 - x) / 0.5; },
      -20, 20);
  EXPECT_NEAR(b.mean, (1.0 / 2 + 3.0 / 0.5) / (0.5 + 2.0), 1e-8);
  EXPECT_NEAR(b.variance, 1 / 2.5, 1e-8);
  EXPECT_NEAR(b.entropy,
              0.5 * std::log(2 * std::numbers::pi * std::numbers::e / 2.5),
              1e-7);
}

TEST(RhoTest, Examples) {
  const double h1 = 0.5 * std::log(2 * std::numbers::pi * std::numbers::e);
  EXPECT_NEAR(rho(Belief::Gaussian(0, 1), PrivacyMeasure::kEntropy), h1, 1e-15);
  EXPECT_NEAR(rho(Belief::Gaussian(0, 1), PrivacyMeasure::kEntropy), 1.41894,
              1e-5);
  EXPECT_EQ(rho(Belief::Gaussian(0, 2), PrivacyMeasure::kPrecision), -0.5);
  EXPECT_EQ(rho(Belief::PointMass(1), PrivacyMeasure::kPrecision), -kInf);
  EXPECT_EQ(rho(Belief::PointMass(1), PrivacyMeasure::kEntropy), -kInf);
}

TEST(RhoTest, Simplified) {
  EXPECT_EQ(rho_simplified(1, PrivacyMeasure::kPrecision), -1.0);
  EXPECT_EQ(rho_simplified(2, PrivacyMeasure::kPrecision), -0.5);
  EXPECT_NEAR(rho_simplified(1, PrivacyMeasure::kEntropy),
              0.5 * std::log(2 * std::numbers::pi * std::numbers::e), 1e-15);
  EXPECT_EQ(rho_simplified(0, PrivacyMeasure::kPrecision), -kInf);
  EXPECT_EQ(rho_simplified(0, PrivacyMeasure::kEntropy), -kInf);
}

TEST(RhoTest, OfNoise) {
  EXPECT_EQ(rho_of_noise(NoiseSpec::Uniform(4), PrivacyMeasure::kPrecision),
            -0.25);
  EXPECT_NEAR(rho_of_noise(NoiseSpec::Uniform(1), PrivacyMeasure::kEntropy),
              std::log(2 * std::sqrt(3.0)), 1e-15);
  EXPECT_THROW(
      rho_of_noise(NoiseSpec::TwoPoint(1, 1, 0.5), PrivacyMeasure::kEntropy),
      std::domain_error);
}

TEST(RhoTest, GaussianBeliefCarriesMoreEntropyThanUniformBelief) {
  for (double nu : {0.1, 0.5, 1.0, 3.0}) {
    const Belief g = observer_posterior(0.3, 0.0, 0.5, NoiseSpec::Gaussian(nu),
                                        0.0, Params());
    const Belief u = observer_posterior(0.3, 0.0, 0.5, NoiseSpec::Uniform(nu),
                                        0.0, Params());
    EXPECT_GT(entropy(NoiseSpec::Gaussian(nu)).nats,
              entropy(NoiseSpec::Uniform(nu)).nats);
    EXPECT_TRUE(std::isfinite(g.entropy));
    EXPECT_TRUE(std::isfinite(u.entropy));
  }
}

}  // namespace
}  // namespace kbc
