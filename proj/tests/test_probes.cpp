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
#include <random>

#include "nmzi/analysis.hpp"
#include "nmzi/pointer.hpp"
#include "nmzi/probes.hpp"

namespace nmzi {
namespace {

CVector qubit_state(double a0, double a1) {
  CVector v(2);
  v << a0, a1;
  return v;
}

double infidelity(const DensityMatrix& rho, const CVector& psi) {
  return 1.0 - fidelity(rho, DensityMatrix::pure(psi.normalized()));
}

TEST(Coupling, ZeroStrengthIsIdentity) {
  const auto cu = coupling_unitary(ProbeConfig::qubit("A", PathLabel::A, 0.0));
  EXPECT_EQ(cu.on_present, CMatrix::Identity(2, 2));
  EXPECT_EQ(cu.control, std::vector{PathLabel::A});
}

TEST(Coupling, FullStrengthFlipsTheProbe) {
  const auto cu = coupling_unitary(ProbeConfig::qubit("A", PathLabel::A, 1.0));
  const CVector out = cu.on_present * qubit_state(1, 0);
  EXPECT_NEAR(std::abs(out(1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(out(0)), 0.0, 1e-15);
}

TEST(Coupling, WeakStrengthExcitationAmplitude) {
  const auto cu = coupling_unitary(ProbeConfig::qubit("A", PathLabel::A, 1e-4));
  const CVector out = cu.on_present * qubit_state(1, 0);
  EXPECT_NEAR(out(1).real(), 0.01, 1e-15);
  EXPECT_NEAR(out(0).real(), std::sqrt(1 - 1e-4), 1e-15);
}

TEST(Coupling, RotationIsUnitaryForAnyStrength) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(unitarity_deviation(qubit_rotation(u(rng))), 1e-12);
  EXPECT_LT(unitarity_deviation(coupling_unitary(ProbeConfig::qubit("A", PathLabel::A, 0.3)).full()), 1e-12);
}

TEST(Coupling, StrengthOutsideUnitIntervalIsRejected) {
  EXPECT_THROW((void)coupling_unitary(ProbeConfig::qubit("A", PathLabel::A, 1.5)), std::invalid_argument);
  EXPECT_THROW((void)coupling_unitary(ProbeConfig::nonlocal_w("w", -0.1)), std::invalid_argument);
  EXPECT_THROW(ProbeSet{}.add(ProbeConfig::qubit("A", PathLabel::A, std::nan(""))), std::invalid_argument);
}

TEST(Coupling, NonlocalWCouplesIdenticallyInBothArms) {
  const auto cu = coupling_unitary(ProbeConfig::nonlocal_w("w", 0.2));
  EXPECT_EQ(cu.control, (std::vector{PathLabel::B, PathLabel::C}));
  EXPECT_EQ(cu.on_present, qubit_rotation(0.2));
}

TEST(Variants, COnlyGivesTheExactFirstState) {
  for (double eps : {1e-6, 1e-4, 1e-2, 0.3, 0.9}) {
    const ProbeSet probes{c_only_variant(ProbeConfig::nonlocal_w("w", eps))};
    const auto rho = conditional_probe_state(preset_griffiths_eq22(), probes, 0);
    EXPECT_LT(infidelity(rho, qubit_state(std::sqrt(1 - eps), std::sqrt(eps))), 1e-12) << eps;
  }
}

TEST(Variants, BOnlyMatchesTheSecondStateToFirstOrder) {
  for (double eps : {1e-6, 1e-4, 1e-2, 0.1}) {
    const ProbeSet probes{b_only_variant(ProbeConfig::nonlocal_w("w", eps))};
    const auto rho = conditional_probe_state(preset_griffiths_eq22(), probes, 0);
    const double overlap = 1.0 - infidelity(rho, qubit_state(std::sqrt(1 - eps), -std::sqrt(eps)));
    EXPECT_GE(overlap, 1.0 - eps * eps) << eps;
    // the exact post-selected state
    EXPECT_LT(infidelity(rho, qubit_state(2 - std::sqrt(1 - eps), -std::sqrt(eps))), 1e-12) << eps;
  }
}

TEST(Variants, BothArmsLeaveTheProbeUntouched) {
  for (double eps : {0.0, 1e-4, 0.5, 1.0}) {
    const ProbeSet probes{ProbeConfig::nonlocal_w("w", eps)};
    const auto rho = conditional_probe_state(preset_griffiths_eq22(), probes, 0);
    EXPECT_LT(infidelity(rho, qubit_state(1, 0)), 1e-12) << eps;
  }
}

TEST(Variants, LocalProbesAreRejected) {
  const auto local = ProbeConfig::qubit("B", PathLabel::B, 0.1);
  EXPECT_THROW((void)c_only_variant(local), std::invalid_argument);
  EXPECT_THROW((void)b_only_variant(local), std::invalid_argument);
}

TEST(Variants, BothArmsEqualsComposedSingleArms) {
  const auto spec = preset_griffiths_eq22();
  const auto w = ProbeConfig::nonlocal_w("w", 0.37);
  const auto mid = evolve_range(spec, ProbeSet{ProbeConfig::qubit("idle", PathLabel::S, 0.0)}, JointState::basis(PathLabel::S, {2}), 0, 3);
  const auto c = coupling_unitary(c_only_variant(w));
  const auto b = coupling_unitary(b_only_variant(w));
  const auto both = coupling_unitary(w);
  const auto composed = apply_controlled_unitary(apply_controlled_unitary(mid, c.control, 0, c.on_present),
                                                 b.control, 0, b.on_present);
  const auto direct = apply_controlled_unitary(mid, both.control, 0, both.on_present);
  ASSERT_EQ(composed.size(), direct.size());
  for (const auto& [label, a] : direct) EXPECT_LT(std::abs(composed.amplitude(label) - a), 1e-12);
}

TEST(ProbeSetRules, IdsUniqueAndOneProbePerModelAndPath) {
  ProbeSet s;
  s.add(ProbeConfig::qubit("B", PathLabel::B, 0.1));
  EXPECT_THROW(s.add(ProbeConfig::qubit("B", PathLabel::C, 0.1)), std::invalid_argument);
  EXPECT_THROW(s.add(ProbeConfig::qubit("B2", PathLabel::B, 0.1)), std::invalid_argument);
  // a different model on the same path is allowed
  EXPECT_NO_THROW(s.add(ProbeConfig::nonlocal_w("w", 0.1)));
  EXPECT_THROW(s.add(ProbeConfig::nonlocal_w("w2", 0.1, false, true)), std::invalid_argument);
  EXPECT_THROW(s.add(ProbeConfig::qubit("", PathLabel::A, 0.1)), std::invalid_argument);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.index_of("w"), 1u);
  EXPECT_FALSE(s.index_of("nope"));
}

TEST(ProbeSetRules, ModelNamesRoundTrip) {
  for (auto m : {ProbeModel::qubit_local, ProbeModel::qubit_nonlocal_w, ProbeModel::pointer_gaussian}) {
    EXPECT_EQ(parse_probe_model(to_string(m)), m);
  }
  EXPECT_THROW((void)parse_probe_model("qubit"), std::invalid_argument);
}

TEST(ProbeSetRules, RegistrationOrderNeverChangesProbabilities) {
  const auto spec = preset_griffiths_eq22().with_inner_phase(0.7);
  const ProbeSet probes{ProbeConfig::qubit("B", PathLabel::B, 0.2), ProbeConfig::nonlocal_w("w", 0.3),
                        ProbeConfig::qubit("E", PathLabel::E, 0.4), ProbeConfig::qubit("F", PathLabel::F, 0.1)};
  const auto base = pattern_distribution(spec, probes);
  std::array<std::size_t, 4> perm{0, 1, 2, 3};
  while (std::next_permutation(perm.begin(), perm.end())) {
    const auto dist = pattern_distribution(spec, probes.permuted(perm));
    for (const auto& [pat, p] : dist.probabilities) {
      OutcomePattern orig{std::vector<std::uint32_t>(4), pat.detector};
      for (std::size_t j = 0; j < 4; ++j) orig.outcomes[perm[j]] = pat.outcomes[j];
      EXPECT_NEAR(base.probability(orig), p, 1e-14);
    }
  }
}

TEST(Pointer, ReadyStateIsNormalizedGaussian) {
  const auto p = ProbeConfig::gaussian_pointer("p", {PathLabel::A}, 0.0, 1.0);
  const CVector psi = ready_state(p);
  EXPECT_NEAR(psi.squaredNorm(), 1.0, 1e-14);
  const auto x = pointer_grid(p.pointer);
  double var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) var += x[i] * x[i] * std::norm(psi(static_cast<Eigen::Index>(i)));
  EXPECT_NEAR(var, 1.0, 1e-10);
  EXPECT_EQ(x.size(), 257u);
  EXPECT_DOUBLE_EQ(x.front(), -8.0);
  EXPECT_DOUBLE_EQ(x.back(), 8.0);
}

TEST(Pointer, TranslationIsUnitaryAndShiftsTheMean) {
  PointerParams q;
  q.shift = 0.123;
  const CMatrix t = pointer_translation(q);
  EXPECT_LT(unitarity_deviation(t), 1e-10);
  const auto p = ProbeConfig::gaussian_pointer("p", {PathLabel::A}, q.shift, 1.0);
  const CVector moved = t * ready_state(p);
  const auto x = pointer_grid(q);
  double mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mean += x[i] * std::norm(moved(static_cast<Eigen::Index>(i)));
  EXPECT_NEAR(mean, q.shift, 1e-10);
}

TEST(Pointer, GridTooCoarseOrEvenIsRejected) {
  auto coarse = ProbeConfig::gaussian_pointer("p", {PathLabel::A}, 0.01, 1.0);
  coarse.pointer.bins = 7;
  EXPECT_THROW(validate(coarse), std::invalid_argument);
  auto even = ProbeConfig::gaussian_pointer("p", {PathLabel::A}, 0.01, 1.0);
  even.pointer.bins = 256;
  EXPECT_THROW(validate(even), std::invalid_argument);
  auto flat = ProbeConfig::gaussian_pointer("p", {PathLabel::A}, 0.01, 0.0);
  EXPECT_THROW(validate(flat), std::invalid_argument);
}

TEST(Pointer, PathAShiftsByTheFullDelta) {
  const double width = 1.0, shift = 0.01;
  const ProbeSet probes{ProbeConfig::gaussian_pointer("p", {PathLabel::A}, shift, width)};
  const auto r = gaussian_pointer_state(preset_griffiths_eq22(), probes, 0);
  EXPECT_NEAR(r.mean / shift, 1.0, 0.01);
  EXPECT_TRUE(r.wavefunction.has_value());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Pointer, BothInnerArmsCancel) {
  const double shift = 0.01;
  const ProbeSet probes{ProbeConfig::gaussian_pointer("p", {PathLabel::B, PathLabel::C}, shift, 1.0)};
  const auto r = gaussian_pointer_state(preset_griffiths_eq22(), probes, 0);
  EXPECT_LE(std::abs(r.mean), 1e-3 * shift);
}

TEST(Pointer, ZeroShiftLeavesTheReadyState) {
  const ProbeSet probes{ProbeConfig::gaussian_pointer("p", {PathLabel::B}, 0.0, 1.0)};
  const auto r = gaussian_pointer_state(preset_griffiths_eq22(), probes, 0);
  ASSERT_TRUE(r.wavefunction.has_value());
  EXPECT_NEAR(std::abs(r.wavefunction->dot(ready_state(probes[0]))), 1.0, 1e-12);
  EXPECT_LT(r.bures_angle, 1e-7);
}

TEST(Pointer, StrongShiftIsWarned) {
  const ProbeSet probes{ProbeConfig::gaussian_pointer("p", {PathLabel::A}, 0.5, 1.0)};
  const auto r = gaussian_pointer_state(preset_griffiths_eq22(), probes, 0);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Pointer, QubitAndPointerTracesAgree) {
  const double eps = 1e-4;
  const auto spec = preset_griffiths_eq22();
  for (PathLabel p : {PathLabel::S, PathLabel::A, PathLabel::B, PathLabel::C, PathLabel::F}) {
    const std::string id(to_string(p));
    const double q = trace_angle(spec, ProbeSet{ProbeConfig::qubit(id, p, eps)}, 0);
    const auto ptr = ProbeSet{ProbeConfig::gaussian_pointer(id, {p}, 2.0 * std::sqrt(eps), 1.0)};
    const double g = gaussian_pointer_state(spec, ptr, 0).bures_angle;
    EXPECT_LT(std::abs(g - q) / q, 0.05) << id;
  }
}

}  // namespace
}  // namespace nmzi
