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
#include "ssrt/ancilla.h"
#include "ssrt/error.h"
#include "ssrt/teleport.h"

namespace ssrt {
namespace {

constexpr double kPi = std::numbers::pi;

BuildParams with_n(int n) {
    BuildParams p;
    p.photons = n;
    return p;
}

TEST(Arrangements, CountsAndDetections) {
    auto a = arrangements(2, 3);
    EXPECT_EQ(a.size(), 6u);
    for (const auto& s : a) {
        EXPECT_EQ(s.detected_total(), 2);
        auto d = detection_list(s);
        EXPECT_EQ(d.ports.size(), 2u);
        EXPECT_TRUE(std::is_sorted(d.ports.begin(), d.ports.end()));
        for (int p : d.ports) EXPECT_GT(s.counts[p], 0);
    }
    EXPECT_EQ(arrangements(0, 4).size(), 1u);
}

TEST(PhaseCorrection, KnownExamples) {
    EXPECT_EQ(phase_correction({}, 2), 0.0);
    EXPECT_NEAR(phase_correction({{1}}, 1), kPi, 1e-15);
    EXPECT_NEAR(phase_correction({{1, 1, 2}}, 3), 0.0, 1e-15);
    EXPECT_THROW(phase_correction({{5}}, 3), InvalidArgument);
}

TEST(Conditional, GjcTeleportsSourceIntact) {
    SourceParams p{1e-3, 0.6, 0.8};
    ConditionalState cs = conditional_state(build(AncillaKind::gjc, {}), p, 1);
    Eigen::Matrix2cd want;
    want << 0.5, p.g() / 2.0, std::conj(p.g()) / 2.0, 0.5;
    EXPECT_LT((cs.matrix - want).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_FALSE(cs.failure);
    EXPECT_NEAR(cs.weight, 0.5, 1e-15);
}

TEST(Conditional, ZeroVisibilityAndUniformKlm) {
    ConditionalState cs = conditional_state(build(AncillaKind::optimal_klm, with_n(3)), {1e-3, 0.0, 0.1}, 2);
    EXPECT_EQ(std::abs(cs.matrix(0, 1)), 0.0);
    SourceParams p{1e-3, 0.7, 0.3};
    cs = conditional_state(build(AncillaKind::klm, with_n(3)), p, 2);
    Eigen::Matrix2cd want;
    want << 0.5, p.g() / 2.0, std::conj(p.g()) / 2.0, 0.5;
    EXPECT_LT((cs.matrix - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Conditional, WeightsAndFailureSectors) {
    auto spec = build(AncillaKind::tri_amplitude, with_n(4));
    auto f = *spec.diagonal();
    SourceParams p{1e-3, 0.5, 0.2};
    double total = 0.0;
    for (int n = 0; n <= 5; ++n) {
        ConditionalState cs = conditional_state(spec, p, n);
        EXPECT_NEAR(cs.matrix.trace().real(), 1.0, 1e-10);
        const double fn = n <= 4 ? std::norm(f[n]) : 0.0;
        const double fp = n >= 1 ? std::norm(f[n - 1]) : 0.0;
        EXPECT_NEAR(cs.weight, (fn + fp) / 2.0, 1e-15);
        EXPECT_EQ(cs.failure, n == 0 || n == 5);
        total += cs.weight;
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_THROW(conditional_state(spec, p, 6), InvalidArgument);
    BuildParams cp;
    cp.alpha = 0.5;
    EXPECT_THROW(conditional_state(build(AncillaKind::coherent_pair, cp), p, 1), InvalidArgument);
}

TEST(Pipeline, GjcHasTwoCorrectableArrangements) {
    SourceParams p{1e-3, 0.6, 0.8};
    PipelineResult r = simulate_pipeline(build(AncillaKind::gjc, {}), p);
    int in_sector_one = 0;
    for (const auto& b : r.branches) {
        if (b.sector != 1) continue;
        ++in_sector_one;
        EXPECT_GT(std::abs(b.c0), 0.1);
        EXPECT_GT(std::abs(b.c1), 0.1);
    }
    EXPECT_EQ(in_sector_one, 2);
    EXPECT_LT(r.max_identity_error, 1e-12);
    EXPECT_LT(r.max_expansion_error, 1e-12);
    EXPECT_LT(r.max_reconstruction_error, 1e-12);
}

TEST(Pipeline, FailureSectorHoldsOnlyOneTerm) {
    SourceParams p{1e-3, 0.6, 0.8};
    PipelineResult r = simulate_pipeline(build(AncillaKind::klm, with_n(2)), p);
    for (const auto& b : r.branches) {
        if (b.sector == 0) {
            EXPECT_EQ(b.c1, Complex(0.0));
            EXPECT_NEAR(std::abs(b.b_state(0, 1)), 0.0, 1e-15);
        }
    }
    EXPECT_TRUE(r.sectors.front().failure);
    EXPECT_TRUE(r.sectors.back().failure);
}

TEST(Pipeline, ReconstructionMatchesConditionalStates) {
    SourceParams p{1e-3, 0.45, 2.1};
    for (int n = 1; n <= 4; ++n) {
        for (auto k : {AncillaKind::klm, AncillaKind::optimal_klm}) {
            PipelineResult r = simulate_pipeline(build(k, with_n(n)), p);
            EXPECT_LT(r.max_reconstruction_error, 1e-10) << n;
            EXPECT_LT(r.max_identity_error, 1e-10) << n;
            EXPECT_LT(r.max_expansion_error, 1e-10) << n;
            for (int s = 0; s <= n + 1; ++s) {
                ConditionalState want = conditional_state(build(k, with_n(n)), p, s);
                EXPECT_NEAR(r.sectors[s].weight, want.weight, 1e-10);
                EXPECT_LT((r.sectors[s].matrix - want.matrix).cwiseAbs().maxCoeff(), 1e-10);
            }
        }
    }
}

TEST(Pipeline, ComplexAmplitudesCarryTheirPhase) {
    std::vector<Complex> f = {std::polar(0.6, 0.3), std::polar(0.48, -1.2), std::polar(0.64, 2.0)};
    AncillaSpec spec = diagonal_spec(f, ModeLayout::one_photon_per_mode);
    PipelineResult r = simulate_pipeline(spec, {1e-3, 0.7, 0.4});
    EXPECT_LT(r.max_reconstruction_error, 1e-10);
}

TEST(Pipeline, CapacityLimit) {
    EXPECT_THROW(simulate_pipeline(build(AncillaKind::klm, with_n(kMaxTeleportPhotons + 1)), {1e-3, 0.5, 0.1}),
                 CapacityError);
}

TEST(Measurement, KetsAreOrthonormal) {
    auto [plus, minus] = measurement_kets({0.7, 1.9});
    EXPECT_NEAR(plus.norm(), 1.0, 1e-15);
    EXPECT_NEAR(minus.norm(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(plus.dot(minus)), 0.0, 1e-15);
}

TEST(Measurement, KnownProbabilities) {
    const double eps = 1e-3;
    SourceParams p0{eps, 0.0, 0.4};
    auto spec = build(AncillaKind::optimal_klm, with_n(3));
    for (int n = 1; n <= 3; ++n) {
        ConditionalState cs = conditional_state(spec, p0, n);
        auto [pp, pm] = measurement_probs(cs, {kPi / 2, 0.9}, p0);
        EXPECT_NEAR(pp, eps * cs.weight / 2, 1e-18);
        EXPECT_NEAR(pm, eps * cs.weight / 2, 1e-18);
    }
    SourceParams p{eps, 0.7, 0.4};
    ConditionalState g = conditional_state(build(AncillaKind::gjc, {}), p, 1);
    auto [pp, pm] = measurement_probs(g, {kPi / 2, p.theta}, p);
    EXPECT_NEAR(pp, eps / 4 * (1 + p.g_mod), 1e-18);
    EXPECT_NEAR(pm, eps / 4 * (1 - p.g_mod), 1e-18);
}

TEST(Measurement, ClosedFormEqualsProjectorAndNormalizes) {
    std::vector<Complex> f = {std::polar(0.5, 0.1), std::polar(0.7, 1.3), std::polar(0.3, -0.4),
                              std::polar(std::sqrt(1 - 0.25 - 0.49 - 0.09), 2.2)};
    AncillaSpec spec = diagonal_spec(f, ModeLayout::one_photon_per_mode);
    SourceParams p{1e-3, 0.65, 1.7};
    double total = 0.0;
    for (int n = 0; n <= 4; ++n) {
        ConditionalState cs = conditional_state(spec, p, n);
        MeasurementSetting ms{0.3 + 0.5 * n, 0.2 * n - 0.7};
        auto a = measurement_probs(cs, ms, p);
        auto b = measurement_probs_projector(cs, ms, p);
        EXPECT_NEAR(a.first, b.first, 1e-16);
        EXPECT_NEAR(a.second, b.second, 1e-16);
        total += a.first + a.second;
    }
    EXPECT_NEAR(total, p.epsilon, 1e-15);
}

TEST(Settings, KnownValues) {
    SourceParams p{1e-3, 0.5, 0.3};
    auto klm = build(AncillaKind::klm, with_n(3));
    for (const auto& s : optimal_settings(Parameter::theta, klm, p)) EXPECT_NEAR(s.alpha, kPi / 2, 1e-15);
    for (const auto& s : optimal_settings(Parameter::g_mod, klm, p)) EXPECT_NEAR(s.alpha, kPi / 2, 1e-15);
    auto ok = build(AncillaKind::optimal_klm, with_n(2));
    MeasurementSetting s = optimal_settings(Parameter::g_mod, conditional_state(ok, p, 1), p);
    EXPECT_NEAR(std::tan(s.alpha), 2.0 * std::sqrt(0.125) / (0.25 * 0.5), 1e-9);
    EXPECT_GE(s.alpha, 0.0);
    EXPECT_LE(s.alpha, kPi);
    const SourceParams p0{1e-3, 0.0, 0.3};
    MeasurementSetting z = optimal_settings(Parameter::g_mod, conditional_state(ok, p0, 1), p0);
    EXPECT_NEAR(z.alpha, kPi / 2, 1e-15);
}

TEST(Fisher, SaturatesSectorSum) {
    SourceParams p{1e-3, 0.7, 0.3};
    FisherReport g = fisher_information(build(AncillaKind::gjc, {}), p);
    EXPECT_NEAR(*g.ratio_gmod, 0.5, 1e-6);
    EXPECT_NEAR(*g.ratio_theta, 0.5, 1e-6);
    auto ok = build(AncillaKind::optimal_klm, with_n(4));
    FisherReport r = fisher_information(ok, p);
    EXPECT_NEAR(*r.ratio_theta, qfi_ratio_closed(ok), 1e-6);
    EXPECT_NEAR(*r.ratio_gmod, qfi_ratio_closed(ok), 1e-6);
    FisherReport z = fisher_information(ok, {1e-3, 0.0, 0.3});
    EXPECT_EQ(z.f_theta, 0.0);
    EXPECT_THROW(fisher_information(ok, {0.1, 0.5, 0.3}), InvalidArgument);
}

TEST(Fisher, DerivativesMatchFiniteDifferences) {
    auto spec = build(AncillaKind::tri_intensity, with_n(4));
    SourceParams p{1e-3, 0.55, 0.9};
    MeasurementSetting ms{1.1, 0.4};
    for (int n = 1; n <= 4; ++n) {
        ConditionalState cs = conditional_state(spec, p, n);
        SectorResponse r = sector_response(cs, ms, p);
        auto x_at = [&](SourceParams q) {
            auto [a, b] = measurement_probs(conditional_state(spec, q, n), ms, q);
            return (a - b) / (a + b);
        };
        const double h = 1e-6;
        SourceParams gp = p, gm = p, tp = p, tm = p;
        gp.g_mod += h;
        gm.g_mod -= h;
        tp.theta += h;
        tm.theta -= h;
        EXPECT_NEAR(r.x, x_at(p), 1e-13);
        EXPECT_NEAR(r.dx_gmod, (x_at(gp) - x_at(gm)) / (2 * h), 1e-8);
        EXPECT_NEAR(r.dx_theta, (x_at(tp) - x_at(tm)) / (2 * h), 1e-8);
    }
}

TEST(Fisher, PipelineRouteAgrees) {
    SourceParams p{1e-3, 0.35, 4.0};
    for (int n = 1; n <= 4; ++n) {
        auto spec = build(AncillaKind::optimal_klm, with_n(n));
        PipelineResult pipe = simulate_pipeline(spec, p);
        auto sg = optimal_settings(Parameter::g_mod, spec, p);
        auto st = optimal_settings(Parameter::theta, spec, p);
        FisherReport a = fisher_information_pipeline(pipe, p, sg, st);
        FisherReport b = fisher_information(spec, p);
        EXPECT_NEAR(a.f_gmod, b.f_gmod, 1e-9 * b.f_gmod);
        EXPECT_NEAR(a.f_theta, b.f_theta, 1e-9 * b.f_theta);
    }
}

TEST(Failure, UniformKlm) {
    for (int n = 1; n <= 10; ++n)
        EXPECT_NEAR(failure_probability(build(AncillaKind::klm, with_n(n))), 1.0 / (n + 1), 1e-12);
    EXPECT_NEAR(failure_probability(build(AncillaKind::gjc, {})), 0.5, 1e-15);
}

}  // namespace
}  // namespace ssrt
