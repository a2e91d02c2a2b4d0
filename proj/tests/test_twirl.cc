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

#include "ssrt/ancilla.h"
#include "ssrt/error.h"
#include "ssrt/qfi.h"
#include "ssrt/twirl.h"

namespace ssrt {
namespace {

BipartiteFockState bs(std::vector<int> a, std::vector<int> b) {
    return {OccupationVector(std::move(a)), OccupationVector(std::move(b))};
}

void expect_valid(const BlockDensity& bd, double want_trace) {
    double total = 0.0;
    for (const auto& b : bd.blocks) {
        EXPECT_LT((b.matrix - b.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b.matrix);
        EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
        for (const auto& s : b.basis) EXPECT_EQ(sector_of(s, bd.kind), b.label);
        total += b.trace();
    }
    EXPECT_NEAR(total, want_trace, 1e-10);
}

Density source_density(const SourceParams& p) {
    return Density(1, 1, {bs({0}, {1}), bs({1}, {0})}, source_first_order(p));
}

TEST(TwirlLocal, SplitsSinglePhotonEntangledState) {
    SparseKet s(1, 1);
    s.add(bs({0}, {1}), 1.0 / std::sqrt(2.0));
    s.add(bs({1}, {0}), 1.0 / std::sqrt(2.0));
    BlockDensity bd = twirl_local(s);
    ASSERT_EQ(bd.blocks.size(), 2u);
    EXPECT_EQ(bd.blocks[0].label, (SectorLabel{0, 1}));
    EXPECT_EQ(bd.blocks[1].label, (SectorLabel{1, 0}));
    EXPECT_NEAR(bd.blocks[0].trace(), 0.5, 1e-15);
    EXPECT_NEAR(bd.blocks[1].trace(), 0.5, 1e-15);
    EXPECT_EQ(bd.blocks[0].matrix.rows(), 1);
    expect_valid(bd, 1.0);
}

TEST(TwirlLocal, TwoPhotonEntangledStateIsOneBlock) {
    BlockDensity bd = twirl_local(build(AncillaKind::tpe, {}).materialize());
    ASSERT_EQ(bd.blocks.size(), 1u);
    EXPECT_EQ(bd.blocks[0].label, (SectorLabel{1, 1}));
    EXPECT_NEAR(bd.blocks[0].trace(), 1.0, 1e-12);
}

TEST(TwirlLocal, KeepsInSectorCoherence) {
    BlockDensity bd = twirl_local(build(AncillaKind::tpe, {}).materialize());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(bd.blocks[0].matrix);
    EXPECT_NEAR(es.eigenvalues().maxCoeff(), 1.0, 1e-12);  // still pure
}

TEST(TwirlLocal, IsIdempotent) {
    BuildParams bp;
    bp.photons = 3;
    SparseKet k = build(AncillaKind::optimal_klm, bp).materialize();
    BlockDensity once = twirl_local(k);
    BlockDensity twice = twirl_local(once);
    ASSERT_EQ(once.blocks.size(), twice.blocks.size());
    for (std::size_t i = 0; i < once.blocks.size(); ++i)
        EXPECT_LT((once.blocks[i].matrix - twice.blocks[i].matrix).cwiseAbs().maxCoeff(), 1e-15);
    expect_valid(once, 1.0);
}

TEST(TwirlGlobal, SingleModeSuperposition) {
    SparseKet s(1, 0);
    s.add(bs({0}, {}), 1.0 / std::sqrt(2.0));
    s.add(bs({1}, {}), 1.0 / std::sqrt(2.0));
    Density d = to_density(twirl_global(s));
    EXPECT_NEAR(std::abs(d.matrix()(0, 0) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(d.matrix()(1, 1) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(d.matrix()(0, 1)), 0.0, 1e-15);
}

TEST(TwirlGlobal, CoherentTruncationGivesPoissonDiagonal) {
    const double a2 = 0.8;
    SparseKet s(1, 0);
    double fact = 1.0;
    for (int n = 0; n <= 10; ++n) {
        if (n > 0) fact *= n;
        s.add(bs({n}, {}), std::exp(-a2 / 2) * std::pow(a2, n / 2.0) / std::sqrt(fact));
    }
    BlockDensity bd = twirl_global(s);
    ASSERT_EQ(bd.blocks.size(), 11u);
    fact = 1.0;
    for (int n = 0; n <= 10; ++n) {
        if (n > 0) fact *= n;
        EXPECT_EQ(bd.blocks[n].matrix.rows(), 1);
        EXPECT_NEAR(bd.blocks[n].trace(), std::exp(-a2) * std::pow(a2, n) / fact, 1e-15);
    }
}

TEST(TwirlGlobal, NumberDiagonalInputUnchanged) {
    Density d(1, 0, {bs({0}, {}), bs({2}, {})}, Eigen::Vector2cd(0.3, 0.7).asDiagonal());
    Density out = to_density(twirl_global(d));
    EXPECT_LT((out.matrix() - d.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

// Each TMSV term |n>|n> has its own total photon number, so the global map
// dephases the pure state into a thermal-weight mixture; applying it again
// changes nothing.
TEST(TwirlGlobal, TmsvTruncation) {
    BuildParams bp;
    bp.squeezing = 0.1;
    AncillaSpec spec = build(AncillaKind::tmsv, bp);
    BlockDensity once = twirl_global(spec.materialize());
    expect_valid(once, 1.0);
    for (const auto& b : once.blocks) {
        EXPECT_EQ(b.matrix.rows(), 1);
        const int n = b.label.n_a / 2;
        EXPECT_NEAR(b.trace(), spec.weight(n, n), 1e-14);
    }
    BlockDensity twice = twirl_global(once);
    ASSERT_EQ(twice.blocks.size(), once.blocks.size());
    for (std::size_t i = 0; i < once.blocks.size(); ++i)
        EXPECT_LT((once.blocks[i].matrix - twice.blocks[i].matrix).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TwirlGlobal, GlobalTwirlOfAncillaKeepsItsRatio) {
    BuildParams bp;
    bp.photons = 3;
    AncillaSpec spec = build(AncillaKind::optimal_klm, bp);
    // Diagonal ancillas sit in one total-number sector: the global twirl is the identity.
    Density before = Density::from_ket(spec.materialize());
    Density after = to_density(twirl_global(before));
    EXPECT_LT((before.matrix() - after.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SectorFilter, FirstOrderBlocksOfSourceWithGjc) {
    SourceParams p{1e-3, 0.6, 0.4};
    Density anc = Density::from_ket(build(AncillaKind::gjc, {}).materialize());
    BlockDensity bd = twirl_local(kron(source_density(p), anc));
    expect_valid(bd, 1.0);
    BlockDensity all = sector_filter(bd, [](SectorLabel) { return true; });
    EXPECT_EQ(all.blocks.size(), bd.blocks.size());
    EXPECT_TRUE(sector_filter(bd, [](SectorLabel) { return false; }).blocks.empty());

    BlockDensity mid = sector_filter(bd, [](SectorLabel l) { return l.n_a == 1 && l.n_b == 1; });
    ASSERT_EQ(mid.blocks.size(), 1u);
    const auto& m = mid.blocks[0].matrix;
    ASSERT_EQ(m.rows(), 2);
    EXPECT_NEAR(mid.blocks[0].trace(), 0.5, 1e-14);
    EXPECT_NEAR(std::abs(m(0, 1)), p.g_mod / 4.0, 1e-14);
    EXPECT_NEAR(bd.find({2, 0})->trace(), 0.25, 1e-14);
    EXPECT_NEAR(bd.find({0, 2})->trace(), 0.25, 1e-14);
}

TEST(Density, KronAndMixture) {
    SparseKet a = SparseKet::basis(bs({1}, {0}));
    SparseKet b = SparseKet::basis(bs({0}, {1}));
    Density mix = Density::from_mixture({{0.25, a}, {0.75, b}});
    EXPECT_NEAR(mix.trace().real(), 1.0, 1e-15);
    EXPECT_EQ(mix.dimension(), 2);
    Density k = kron(mix, mix);
    EXPECT_EQ(k.dimension(), 4);
    EXPECT_EQ(k.modes_a(), 2);
    EXPECT_NEAR(k.trace().real(), 1.0, 1e-15);
    EXPECT_TRUE(k.index_of(bs({1, 0}, {0, 1})).has_value());
    EXPECT_TRUE(k.index_of(bs({1, 1}, {0, 0})).has_value());
    EXPECT_FALSE(k.index_of(bs({1, 1}, {1, 1})).has_value());
}

TEST(Density, Errors) {
    EXPECT_THROW(Density(1, 1, {bs({1}, {0}), bs({0}, {1})}, Eigen::Matrix2cd::Identity()), ShapeError);
    EXPECT_THROW(Density(1, 1, {bs({0}, {1})}, Eigen::Matrix2cd::Identity()), ShapeError);
}

TEST(ProjectSectors, KeepAllWithNegativeThreshold) {
    SparseKet s(1, 1);
    s.add(bs({0}, {1}), 1.0);
    s.add(bs({1}, {0}), 1e-7);
    Density d = Density::from_ket(s);
    EXPECT_EQ(project_sectors(d, SectorKind::local).blocks.size(), 1u);
    EXPECT_EQ(project_sectors(d, SectorKind::local, -1.0).blocks.size(), 2u);
    EXPECT_EQ(project_sectors(d, SectorKind::global, -1.0).blocks.size(), 1u);
}

}  // namespace
}  // namespace ssrt
