// Copyright 2026 The ssr-telescopy Authors
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

#include <cmath>
#include <numbers>

#include "oracles.h"
#include "ssrt/error.h"
#include "ssrt/fock.h"

namespace ssrt {
namespace {

BipartiteFockState bs(std::vector<int> a, std::vector<int> b) {
    return {OccupationVector(std::move(a)), OccupationVector(std::move(b))};
}

const Complex I(0.0, 1.0);

TEST(Occupation, RejectsNegativeEntries) {
    EXPECT_THROW(OccupationVector({1, -1}), InvalidArgument);
    EXPECT_EQ(OccupationVector({2, 0, 3}).total(), 5);
    EXPECT_EQ(OccupationVector::zeros(3).total(), 0);
}

TEST(Occupation, LocalPhotonNumbers) {
    SectorLabel l = local_photon_numbers(bs({1, 1}, {0, 1}));
    EXPECT_EQ(l.n_a, 2);
    EXPECT_EQ(l.n_b, 1);
}

TEST(Occupation, EnumerationIsSortedAndComplete) {
    auto v = occupation_vectors(3, 3);
    EXPECT_EQ(v.size(), 10u);
    for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LT(v[i - 1], v[i]);
    for (const auto& o : v) EXPECT_EQ(o.total(), 3);
}

TEST(Qft, SmallDimensions) {
    EXPECT_NEAR(std::abs(qft_matrix(1)(0, 0) - 1.0), 0.0, 1e-15);
    ModeUnitary q2 = qft_matrix(2);
    const double s = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(q2(0, 0) - s), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(q2(1, 1) + s), 0.0, 1e-15);
    Complex e12 = qft_matrix(3)(1, 2);
    Complex want = std::exp(I * (4.0 * std::numbers::pi / 3.0)) / std::sqrt(3.0);
    EXPECT_NEAR(std::abs(e12 - want), 0.0, 1e-14);
    EXPECT_THROW(qft_matrix(0), InvalidArgument);
}

TEST(ModeUnitaryTest, RejectsNonUnitaryAndNonSquare) {
    EXPECT_THROW(ModeUnitary(Eigen::MatrixXcd::Ones(2, 2)), InvalidArgument);
    EXPECT_THROW(ModeUnitary(Eigen::MatrixXcd::Identity(2, 3)), ShapeError);
}

TEST(ModeUnitaryTest, RandomUnitaryIsDeterministicAndUnitary) {
    ModeUnitary a = random_unitary(5, 42, 3);
    ModeUnitary b = random_unitary(5, 42, 3);
    ModeUnitary c = random_unitary(5, 42, 4);
    EXPECT_EQ((a.matrix() - b.matrix()).norm(), 0.0);
    EXPECT_GT((a.matrix() - c.matrix()).norm(), 1e-3);
    EXPECT_LT((a.matrix().adjoint() * a.matrix() - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Permanent, KnownValues) {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    EXPECT_NEAR(std::abs(permanent(m) - 10.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(permanent(Eigen::MatrixXcd::Identity(5, 5)) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(permanent(Eigen::MatrixXcd::Ones(4, 4)) - 24.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(permanent(Eigen::MatrixXcd(0, 0)) - 1.0), 0.0, 1e-15);
}

TEST(Permanent, MatchesBruteForce) {
    for (int n = 1; n <= 7; ++n) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(n, n);
        Complex want = oracle::permanent(m);
        EXPECT_NEAR(std::abs(permanent(m) - want), 0.0, 1e-10 * std::max(1.0, std::abs(want))) << n;
    }
}

TEST(Permanent, Errors) {
    EXPECT_THROW(permanent(Eigen::MatrixXcd::Ones(2, 3)), ShapeError);
    EXPECT_THROW(permanent(Eigen::MatrixXcd::Ones(13, 13)), CapacityError);
}

TEST(Transition, SinglePhotonAndPhase) {
    ModeUnitary q2 = qft_matrix(2);
    EXPECT_NEAR(std::abs(transition_amplitude(OccupationVector({1, 0}), OccupationVector({0, 1}), q2) -
                         1.0 / std::sqrt(2.0)),
                0.0, 1e-14);
    Eigen::MatrixXcd ph(1, 1);
    ph(0, 0) = std::exp(I * 0.3);
    for (int k = 0; k <= 5; ++k) {
        Complex a = transition_amplitude(OccupationVector({k}), OccupationVector({k}), ModeUnitary(ph));
        EXPECT_NEAR(std::abs(a - std::exp(I * (0.3 * k))), 0.0, 1e-13);
    }
}

TEST(Transition, HongOuMandel) {
    Eigen::MatrixXcd bsm(2, 2);
    bsm << 1.0, 1.0, 1.0, -1.0;
    ModeUnitary bs50(bsm / std::sqrt(2.0));
    // (a+b)(a-b)/2 |0> = (|2,0> - |0,2>)/sqrt2
    EXPECT_NEAR(std::abs(transition_amplitude(OccupationVector({1, 1}), OccupationVector({2, 0}), bs50) -
                         1.0 / std::sqrt(2.0)),
                0.0, 1e-14);
    EXPECT_NEAR(std::abs(transition_amplitude(OccupationVector({1, 1}), OccupationVector({1, 1}), bs50)), 0.0, 1e-15);
}

TEST(Transition, PhotonMismatchIsZero) {
    EXPECT_EQ(transition_amplitude(OccupationVector({1, 0}), OccupationVector({1, 1}), qft_matrix(2)), Complex(0.0));
}

TEST(Apply, VacuumAndSinglePhoton) {
    ModeUnitary q2 = qft_matrix(2);
    std::vector<ModeRef> modes = {{Site::a, 0}, {Site::a, 1}};
    SparseKet vac = SparseKet::vacuum(2, 0);
    SparseKet out = apply_mode_unitary(vac, q2, modes);
    EXPECT_NEAR(std::abs(out.amplitude(bs({0, 0}, {})) - 1.0), 0.0, 1e-15);
    SparseKet one = SparseKet::basis(bs({1, 0}, {}));
    out = apply_mode_unitary(one, q2, modes);
    EXPECT_NEAR(std::abs(out.amplitude(bs({1, 0}, {})) - 1.0 / std::sqrt(2.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(out.amplitude(bs({0, 1}, {})) - 1.0 / std::sqrt(2.0)), 0.0, 1e-14);
}

TEST(Apply, AgreesWithTransitionAmplitudes) {
    ModeUnitary q3 = qft_matrix(3);
    std::vector<ModeRef> modes = {{Site::a, 0}, {Site::a, 1}, {Site::a, 2}};
    SparseKet in = SparseKet::basis(bs({1, 1, 0}, {}));
    SparseKet out = apply_mode_unitary(in, q3, modes);
    EXPECT_NEAR(out.norm2(), 1.0, 1e-12);
    for (const auto& o : occupation_vectors(2, 3)) {
        Complex t = transition_amplitude(OccupationVector({1, 1, 0}), o, q3);
        EXPECT_NEAR(std::abs(out.amplitude({o, OccupationVector()}) - t), 0.0, 1e-12);
    }
}

TEST(Apply, CrossSiteUnitaryPreservesNorm) {
    ModeUnitary u = random_unitary(4, 7);
    std::vector<ModeRef> modes = {{Site::a, 0}, {Site::b, 1}, {Site::a, 1}, {Site::b, 0}};
    SparseKet s(2, 2);
    s.add(bs({1, 1}, {0, 1}), 0.6);
    s.add(bs({2, 0}, {1, 0}), Complex(0.0, 0.8));
    SparseKet out = apply_mode_unitary(s, u, modes);
    EXPECT_NEAR(out.norm2(), 1.0, 1e-10);
}

TEST(Apply, UntouchedModesAreSpectators) {
    ModeUnitary q2 = qft_matrix(2);
    std::vector<ModeRef> modes = {{Site::a, 1}, {Site::a, 2}};
    SparseKet in = SparseKet::basis(bs({3, 1, 0}, {2}));
    SparseKet out = apply_mode_unitary(in, q2, modes);
    for (const auto& [st, amp] : out.amplitudes()) {
        EXPECT_EQ(st.site_a[0], 3);
        EXPECT_EQ(st.site_b[0], 2);
        EXPECT_NEAR(std::abs(amp), 1.0 / std::sqrt(2.0), 1e-14);
    }
}

TEST(Apply, Errors) {
    ModeUnitary q2 = qft_matrix(2);
    std::vector<ModeRef> dup = {{Site::a, 0}, {Site::a, 0}};
    std::vector<ModeRef> oob = {{Site::a, 0}, {Site::a, 5}};
    std::vector<ModeRef> short_list = {{Site::a, 0}};
    SparseKet s = SparseKet::basis(bs({1, 0}, {}));
    EXPECT_THROW(apply_mode_unitary(s, q2, dup), ShapeError);
    EXPECT_THROW(apply_mode_unitary(s, q2, oob), ShapeError);
    EXPECT_THROW(apply_mode_unitary(s, q2, short_list), ShapeError);
}

TEST(Ket, DropsTinyAmplitudesAndCancels) {
    SparseKet s(1, 1);
    s.add(bs({1}, {0}), 1e-15);
    EXPECT_TRUE(s.empty());
    s.add(bs({1}, {0}), 0.5);
    s.add(bs({1}, {0}), -0.5);
    EXPECT_TRUE(s.empty());
}

TEST(Ket, ShapeAndCapacity) {
    SparseKet s(1, 1);
    EXPECT_THROW(s.add(bs({1, 0}, {0}), 1.0), ShapeError);
    EXPECT_THROW(s.add(bs({13}, {0}), 1.0), CapacityError);
    EXPECT_THROW(SparseKet(13, 0), CapacityError);
    EXPECT_THROW(SparseKet(1, 1).normalized(), NormalizationError);
}

TEST(Ket, TensorInnerAndSum) {
    SparseKet t = tensor(SparseKet::vacuum(1, 1), SparseKet::vacuum(2, 0));
    EXPECT_EQ(t.modes_a(), 3);
    EXPECT_EQ(t.modes_b(), 1);
    EXPECT_NEAR(std::abs(t.amplitude(bs({0, 0, 0}, {0})) - 1.0), 0.0, 1e-15);

    SparseKet s(1, 1);
    s.add(bs({0}, {1}), 1.0);
    s.add(bs({1}, {0}), I);
    s = s.normalized();
    EXPECT_NEAR(std::abs(inner(s, s) - 1.0), 0.0, 1e-15);
    EXPECT_THROW(inner(s, SparseKet::vacuum(2, 1)), ShapeError);
    EXPECT_THROW(s + SparseKet::vacuum(2, 1), ShapeError);
    SparseKet d = s + s.scaled(-1.0);
    EXPECT_TRUE(d.empty());

    BipartiteFockState c = concat(bs({1}, {0}), bs({0, 2}, {3}));
    EXPECT_EQ(c, bs({1, 0, 2}, {0, 3}));
}

}  // namespace
}  // namespace ssrt
