// Copyright 2026 The nmzi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "nmzi/analysis.hpp"
#include "nmzi/statevec.hpp"

namespace nmzi {
namespace {

using std::numbers::pi;
constexpr double h = 0.70710678118654752440;

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

CVector vec2(Complex a, Complex b) {
  CVector v(2);
  v << a, b;
  return v;
}

JointState sample_state() {
  // (|B,0,1> + 2i|C,1,0> - |A,0,0>) / sqrt(6)
  JointState s({2, 2});
  const double n = std::sqrt(6.0);
  s.set({PathLabel::B, {0, 1}}, 1.0 / n);
  s.set({PathLabel::C, {1, 0}}, Complex{0, 2} / n);
  s.set({PathLabel::A, {0, 0}}, -1.0 / n);
  return s;
}

CMatrix random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex{g(rng), g(rng)};
  Eigen::HouseholderQR<CMatrix> qr(m);
  return qr.householderQ();
}

DensityMatrix random_density(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex{g(rng), g(rng)};
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho);
}

TEST(JointState, ProductStateHasUnitNormAndFixedWidth) {
  const std::array<CVector, 2> ready{vec2(1, 0), vec2(h, h)};
  const auto s = JointState::product(PathLabel::S, ready);
  EXPECT_NEAR(s.norm2(), 1.0, 1e-15);
  EXPECT_EQ(s.size(), 2u);
  for (const auto& [label, a] : s) EXPECT_EQ(label.outcomes.size(), 2u);
  EXPECT_DOUBLE_EQ(s.path_probability(PathLabel::S), s.norm2());
}

TEST(JointState, SetRejectsMalformedLabels) {
  JointState s({2});
  EXPECT_THROW(s.set({PathLabel::A, {0, 0}}, 1.0), std::invalid_argument);
  EXPECT_THROW(s.set({PathLabel::A, {2}}, 1.0), std::out_of_range);
}

TEST(JointState, PruneDropsOnlyNegligibleAmplitudes) {
  auto s = sample_state();
  s.add({PathLabel::D, {1, 1}}, 1e-17);
  const double before = s.path_probability(PathLabel::B);
  s.prune();
  EXPECT_EQ(s.size(), 3u);
  EXPECT_NEAR(s.path_probability(PathLabel::B), before, 1e-12);
}

TEST(JointState, NormalizingZeroStateIsAnError) {
  EXPECT_THROW((void)JointState({2}).normalized(), SimulationError);
}

TEST(LocalUnitary, IdentityLeavesStateUnchanged) {
  const auto s = sample_state();
  const auto on_paths = apply_local_unitary(s, PathSubsystem{{PathLabel::B, PathLabel::C}}, CMatrix::Identity(2, 2));
  const auto on_probe = apply_local_unitary(s, ProbeSubsystem{1}, CMatrix::Identity(2, 2));
  EXPECT_EQ(on_paths.amplitudes(), s.amplitudes());
  EXPECT_EQ(on_probe.amplitudes(), s.amplitudes());
}

TEST(LocalUnitary, SymmetricSplitterTwiceIsASwapWithPhase) {
  const CMatrix bs = mat2(h, Complex{0, h}, Complex{0, h}, h);
  const CMatrix swap_i = mat2(0, Complex{0, 1}, Complex{0, 1}, 0);
  const PathSubsystem bc{{PathLabel::B, PathLabel::C}};
  const auto s = sample_state();
  const auto twice = apply_local_unitary(apply_local_unitary(s, bc, bs), bc, bs);
  const auto once = apply_local_unitary(s, bc, swap_i);
  for (const auto& [label, a] : once) EXPECT_LT(std::abs(twice.amplitude(label) - a), 1e-12);
  for (const auto& [label, a] : twice) EXPECT_LT(std::abs(once.amplitude(label) - a), 1e-12);
}

TEST(LocalUnitary, ControlledRotationOnProbe) {
  const double eps = 0.04;
  JointState s({1 + 1});
  s.set({PathLabel::C, {0}}, h);
  s.set({PathLabel::A, {0}}, h);
  const CMatrix r = mat2(std::sqrt(1 - eps), -std::sqrt(eps), std::sqrt(eps), std::sqrt(1 - eps));
  const std::array control{PathLabel::C};
  const auto out = apply_controlled_unitary(s, control, 0, r);
  EXPECT_NEAR(std::abs(out.amplitude({PathLabel::C, {1}}) / Complex{h}), 0.2, 1e-12);
  EXPECT_NEAR(std::abs(out.amplitude({PathLabel::A, {0}}) - Complex{h}), 0.0, 1e-15);
  EXPECT_EQ(out.amplitude({PathLabel::A, {1}}), Complex{});
}

TEST(LocalUnitary, RejectsNonUnitaryWithDeviation) {
  const CMatrix bad = mat2(1, 0.1, 0, 1);
  try {
    (void)apply_local_unitary(sample_state(), ProbeSubsystem{0}, bad);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("= 0.1"), std::string::npos) << e.what();
  }
}

TEST(LocalUnitary, RejectsProbeIndexOutOfRange) {
  EXPECT_THROW((void)apply_local_unitary(sample_state(), ProbeSubsystem{2}, CMatrix::Identity(2, 2)),
               std::out_of_range);
}

TEST(LocalUnitary, RejectsDimensionMismatch) {
  EXPECT_THROW((void)apply_local_unitary(sample_state(), PathSubsystem{{PathLabel::A}}, CMatrix::Identity(2, 2)),
               std::invalid_argument);
}

TEST(LocalUnitary, RandomSequencesPreserveNorm) {
  std::mt19937_64 rng(11);
  auto s = sample_state();
  const std::array<std::vector<PathLabel>, 3> groups{
      std::vector{PathLabel::A, PathLabel::B}, std::vector{PathLabel::B, PathLabel::C},
      std::vector{PathLabel::C, PathLabel::D}};
  for (int step = 0; step < 200; ++step) {
    if (step % 3 == 0) {
      s = apply_local_unitary(s, ProbeSubsystem{static_cast<std::size_t>(step % 2)}, random_unitary(rng, 2));
    } else {
      s = apply_local_unitary(s, PathSubsystem{groups[step % 3]}, random_unitary(rng, 2));
    }
    ASSERT_NEAR(s.norm2(), 1.0, 1e-12) << "step " << step;
  }
}

TEST(PartialTrace, ProductStateGivesPureProjector) {
  const auto s = JointState::basis(PathLabel::A, {2});
  const auto rho = partial_trace_probe(s, 0);
  const auto ev = rho.eigenvalues();
  EXPECT_NEAR(ev.minCoeff(), 0.0, 1e-15);
  EXPECT_NEAR(ev.maxCoeff(), 1.0, 1e-15);
  EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-15);
}

TEST(PartialTrace, EntangledStateIsMaximallyMixed) {
  JointState s({2});
  s.set({PathLabel::B, {0}}, h);
  s.set({PathLabel::C, {1}}, h);
  const auto ev = partial_trace_probe(s, 0).eigenvalues();
  EXPECT_NEAR(ev(0), 0.5, 1e-12);
  EXPECT_NEAR(ev(1), 0.5, 1e-12);
}

TEST(PartialTrace, RejectsUnnormalizedInput) {
  JointState s({2});
  s.set({PathLabel::B, {0}}, 0.9);
  EXPECT_THROW((void)partial_trace_probe(s, 0), std::invalid_argument);
}

TEST(PartialTrace, RegisterOrderDoesNotMatter) {
  std::mt19937_64 rng(5);
  auto s = JointState::basis(PathLabel::B, {2, 2, 2});
  for (int i = 0; i < 12; ++i) {
    s = apply_local_unitary(s, ProbeSubsystem{static_cast<std::size_t>(i % 3)}, random_unitary(rng, 2));
    s = apply_controlled_unitary(s, std::array{PathLabel::B}, (i + 1) % 3, random_unitary(rng, 2));
    s = apply_local_unitary(s, PathSubsystem{{PathLabel::B, PathLabel::C}}, random_unitary(rng, 2));
  }
  const std::array<std::size_t, 3> perm{2, 0, 1};
  const auto p = s.permuted(perm);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto a = partial_trace_probe(p, j).matrix();
    const auto b = partial_trace_probe(s, perm[j]).matrix();
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
  }
  const std::array<std::size_t, 3> inverse{1, 2, 0};
  EXPECT_EQ(p.permuted(inverse).amplitudes(), s.amplitudes());
}

TEST(DensityMatrixInvariants, RejectsInvalidMatrices) {
  EXPECT_THROW(DensityMatrix(mat2(1, 0.5, 0, 0)), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(mat2(0.6, 0, 0, 0.6)), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(mat2(1.5, 0, 0, -0.5)), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(CMatrix(2, 3)), std::invalid_argument);
}

TEST(BuresAngle, Examples) {
  const auto zero = DensityMatrix::basis(2, 0);
  const auto one = DensityMatrix::basis(2, 1);
  EXPECT_EQ(bures_angle(zero, zero), 0.0);
  EXPECT_NEAR(bures_angle(zero, one), pi / 2, 1e-15);
  const double eps = 1e-4;
  const auto probe = DensityMatrix::pure(vec2(std::sqrt(1 - eps), std::sqrt(eps)));
  // acos loses digits near 1; asin(sqrt(eps)) is the well-conditioned form
  EXPECT_NEAR(bures_angle(probe, zero), std::acos(std::sqrt(1 - eps)), 1e-14);
  EXPECT_NEAR(bures_angle(probe, zero), std::asin(std::sqrt(eps)), 1e-16);
  EXPECT_NEAR(bures_angle(probe, zero), 0.0100001666741671, 1e-15);
}

TEST(BuresAngle, RejectsDimensionMismatch) {
  EXPECT_THROW((void)bures_angle(DensityMatrix::basis(2, 0), DensityMatrix::basis(3, 0)), std::invalid_argument);
}

TEST(BuresAngle, SymmetricAndSatisfiesTriangleInequality) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 3;
    const auto a = random_density(rng, n);
    const auto b = random_density(rng, n);
    const auto c = trial % 5 == 0 ? DensityMatrix::pure(random_unitary(rng, n).col(0)) : random_density(rng, n);
    const double ab = bures_angle(a, b), bc = bures_angle(b, c), ac = bures_angle(a, c);
    EXPECT_NEAR(ab, bures_angle(b, a), 1e-9);
    EXPECT_NEAR(ac, bures_angle(c, a), 1e-9);
    EXPECT_LE(ac, ab + bc + 1e-9);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, pi / 2);
  }
}

TEST(Fidelity, MixedAgainstMixedMatchesClosedForm) {
  // commuting diagonal states: F = (sum sqrt(p_i q_i))^2
  const DensityMatrix a(mat2(0.7, 0, 0, 0.3));
  const DensityMatrix b(mat2(0.2, 0, 0, 0.8));
  const double expected = std::pow(std::sqrt(0.14) + std::sqrt(0.24), 2);
  EXPECT_NEAR(fidelity(a, b), expected, 1e-12);
}

TEST(TraceDistance, OrthogonalPureStatesAreOneApart) {
  EXPECT_NEAR(trace_distance(DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)), 1.0, 1e-15);
}

}  // namespace
}  // namespace nmzi
