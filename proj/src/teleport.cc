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

#include "ssrt/teleport.h"

#include <cmath>
#include <numbers>
#include <string>

#include "ssrt/error.h"

namespace ssrt {

DetectionList detection_list(const Arrangement& s) {
    DetectionList d;
    for (int port = 0; port < s.counts.modes(); ++port)
        for (int c = 0; c < s.counts[port]; ++c) d.ports.push_back(port);
    return d;
}

std::vector<Arrangement> arrangements(int n, int ports) {
    std::vector<Arrangement> out;
    for (auto& occ : occupation_vectors(n, ports)) out.push_back({std::move(occ)});
    return out;
}

double phase_correction(const DetectionList& d, int big_n) {
    if (big_n < 0) throw InvalidArgument("N must be non-negative");
    long long sum = 0;
    for (int port : d.ports) {
        if (port < 0 || port > big_n) throw InvalidArgument("detection port outside 0..N");
        sum += port;
    }
    const long long r = sum % (big_n + 1);
    return 2.0 * std::numbers::pi * static_cast<double>(r) / (big_n + 1);
}

ConditionalState conditional_state(const std::vector<Complex>& f, const SourceParams& p, int n) {
    p.validate();
    const int big_n = static_cast<int>(f.size()) - 1;
    if (big_n < 0) throw InvalidArgument("empty amplitude list");
    if (n < 0 || n > big_n + 1) throw InvalidArgument("sector must lie in 0..N+1");
    ConditionalState cs;
    cs.sector = n;
    if (n == 0 || n == big_n + 1) {
        cs.failure = true;
        const Complex only = n == 0 ? f.front() : f.back();
        cs.weight = std::norm(only) / 2.0;
        if (n == 0) {
            cs.f_n = only;
            cs.matrix(0, 0) = 1.0;
        } else {
            cs.f_prev = only;
            cs.matrix(1, 1) = 1.0;
        }
        return cs;
    }
    cs.f_n = f[static_cast<std::size_t>(n)];
    cs.f_prev = f[static_cast<std::size_t>(n - 1)];
    const double a = std::norm(cs.f_n);
    const double b = std::norm(cs.f_prev);
    const double w = a + b;
    cs.weight = w / 2.0;
    if (w > 0.0) {
        const Complex off = cs.f_n * std::conj(cs.f_prev) * p.g();
        cs.matrix << a / w, off / w, std::conj(off) / w, b / w;
    }
    return cs;
}

ConditionalState conditional_state(const AncillaSpec& spec, const SourceParams& p, int n) {
    auto f = spec.diagonal();
    if (!f) throw InvalidArgument("teleportation needs a diagonal ancilla (fixed total photon number)");
    return conditional_state(*f, p, n);
}

// ----------------------------------------------------------------- pipeline

PipelineResult simulate_pipeline(const AncillaSpec& spec, const SourceParams& p, const PipelineOptions& opt) {
    spec.validate();
    p.validate();
    auto fopt = spec.diagonal();
    if (!fopt) throw InvalidArgument("teleportation needs a diagonal ancilla (fixed total photon number)");
    const std::vector<Complex>& f = *fopt;
    const int big_n = static_cast<int>(f.size()) - 1;
    if (big_n < 1) throw InvalidArgument("teleportation needs N >= 1");
    if (big_n > kMaxTeleportPhotons)
        throw CapacityError("teleportation simulation supports N <= " + std::to_string(kMaxTeleportPhotons) +
                            ", got " + std::to_string(big_n));
    const int modes = big_n + 1;
    const ModeUnitary qft = qft_matrix(modes);
    std::vector<ModeRef> a_modes;
    for (int i = 0; i < modes; ++i) a_modes.push_back({Site::a, i});
    const Eigen::Matrix2cd rho1 = source_first_order(p);

    PipelineResult res;
    res.photons = big_n;
    for (int n = 0; n <= big_n + 1; ++n) {
        const bool has0 = n <= big_n;  // source photon at b_0, ancilla term f_n
        const bool has1 = n >= 1;      // source photon at a_0, ancilla term f_{n-1}
        std::vector<int> a0(static_cast<std::size_t>(modes), 0), b0(static_cast<std::size_t>(modes), 0);
        std::vector<int> a1(static_cast<std::size_t>(modes), 0), b1(static_cast<std::size_t>(modes), 0);
        if (has0) {
            for (int i = 1; i <= n; ++i) a0[static_cast<std::size_t>(i)] = 1;
            b0[0] = 1;
            for (int j = n + 1; j <= big_n; ++j) b0[static_cast<std::size_t>(j)] = 1;
        }
        if (has1) {
            for (int i = 0; i < n; ++i) a1[static_cast<std::size_t>(i)] = 1;
            for (int j = n; j <= big_n; ++j) b1[static_cast<std::size_t>(j)] = 1;
        }
        const OccupationVector in0(a0), in1(a1), out_b0(b0), out_b1(b1);
        std::optional<SparseKet> exp0, exp1;
        if (opt.expansion_cross_check) {
            if (has0) exp0 = apply_mode_unitary(SparseKet::basis({in0, out_b0}), qft, a_modes);
            if (has1) exp1 = apply_mode_unitary(SparseKet::basis({in1, out_b1}), qft, a_modes);
        }
        const Complex fn = has0 ? f[static_cast<std::size_t>(n)] : Complex(0.0);
        const Complex fp = has1 ? f[static_cast<std::size_t>(n - 1)] : Complex(0.0);

        std::array<Eigen::Matrix2cd, 4> gram;
        for (auto& g : gram) g.setZero();
        Eigen::Matrix2cd sector_sum = Eigen::Matrix2cd::Zero();
        for (auto& s : arrangements(n, modes)) {
            BranchRecord br;
            br.detections = detection_list(s);
            br.sector = n;
            br.phase = phase_correction(br.detections, big_n);
            if (has0) br.c0 = transition_amplitude(in0, s.counts, qft);
            if (has1) br.c1 = transition_amplitude(in1, s.counts, qft);
            if (exp0) {
                br.c0_expansion = exp0->amplitude({s.counts, out_b0});
                res.max_expansion_error = std::max(res.max_expansion_error, std::abs(*br.c0_expansion - br.c0));
            }
            if (exp1) {
                br.c1_expansion = exp1->amplitude({s.counts, out_b1});
                res.max_expansion_error = std::max(res.max_expansion_error, std::abs(*br.c1_expansion - br.c1));
            }
            const Complex omega_sum = std::polar(1.0, br.phase);
            if (has0 && has1)
                res.max_identity_error = std::max(res.max_identity_error, std::abs(br.c0 - br.c1 * omega_sum));
            const std::array<Complex, 2> u = {fn * br.c0, fp * br.c1 * omega_sum};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const Complex x = u[static_cast<std::size_t>(i)] * std::conj(u[static_cast<std::size_t>(j)]);
                    gram[static_cast<std::size_t>(2 * i + j)](i, j) += x;
                    br.b_state(i, j) = p.epsilon * rho1(i, j) * x;
                }
            sector_sum += br.b_state;
            br.arrangement = std::move(s);
            res.branches.push_back(std::move(br));
        }
        res.gram.push_back(gram);

        ConditionalState rebuilt;
        rebuilt.sector = n;
        rebuilt.failure = !(has0 && has1);
        rebuilt.f_n = fn;
        rebuilt.f_prev = fp;
        const double tr = sector_sum.trace().real();
        rebuilt.weight = tr / p.epsilon;
        if (tr > 0.0) rebuilt.matrix = sector_sum / tr;
        const ConditionalState expect = conditional_state(f, p, n);
        double err = std::abs(rebuilt.weight - expect.weight);
        if (expect.weight > 0.0) err = std::max(err, (rebuilt.matrix - expect.matrix).cwiseAbs().maxCoeff());
        res.max_reconstruction_error = std::max(res.max_reconstruction_error, err);
        res.sectors.push_back(rebuilt);
    }
    return res;
}

// ------------------------------------------------------------ measurements

std::pair<Eigen::Vector2cd, Eigen::Vector2cd> measurement_kets(const MeasurementSetting& ms) {
    const double c = std::cos(ms.alpha / 2.0);
    const double s = std::sin(ms.alpha / 2.0);
    const Complex ph = std::polar(1.0, -ms.delta);
    Eigen::Vector2cd plus, minus;
    plus << c, s * ph;
    minus << s, -c * ph;
    return {plus, minus};
}

std::pair<double, double> measurement_probs_projector(const ConditionalState& cs, const MeasurementSetting& ms,
                                                      const SourceParams& p) {
    auto [plus, minus] = measurement_kets(ms);
    const double scale = p.epsilon * cs.weight;
    return {scale * (plus.adjoint() * cs.matrix * plus)(0, 0).real(),
            scale * (minus.adjoint() * cs.matrix * minus)(0, 0).real()};
}

SectorResponse sector_response(const ConditionalState& cs, const MeasurementSetting& ms, const SourceParams& p) {
    const double a = std::norm(cs.f_n);
    const double b = std::norm(cs.f_prev);
    const double w = a + b;
    SectorResponse t;
    if (w <= 0.0 || cs.failure) return t;
    const double phi = std::arg(cs.f_n * std::conj(cs.f_prev));
    const double arg = p.theta + phi - ms.delta;
    const double coh = std::sin(ms.alpha) * 2.0 * std::sqrt(a * b) / w;
    t.x = std::cos(ms.alpha) * (a - b) / w + coh * p.g_mod * std::cos(arg);
    t.dx_gmod = coh * std::cos(arg);
    t.dx_theta = -coh * p.g_mod * std::sin(arg);
    return t;
}

std::pair<double, double> measurement_probs(const ConditionalState& cs, const MeasurementSetting& ms,
                                            const SourceParams& p) {
    p.validate();
    if (cs.failure) return measurement_probs_projector(cs, ms, p);
    const SectorResponse t = sector_response(cs, ms, p);
    const double half = p.epsilon * cs.weight / 2.0;
    return {half * (1.0 + t.x), half * (1.0 - t.x)};
}

MeasurementSetting optimal_settings(Parameter param, const ConditionalState& cs, const SourceParams& p) {
    p.validate();
    const double phi = std::arg(cs.f_n * std::conj(cs.f_prev));
    MeasurementSetting ms;
    if (param == Parameter::theta) {
        ms.alpha = std::numbers::pi / 2.0;
        ms.delta = p.theta + phi + std::numbers::pi / 2.0;
        return ms;
    }
    const double a = std::norm(cs.f_n);
    const double b = std::norm(cs.f_prev);
    ms.delta = p.theta + phi;
    ms.alpha = std::atan2(2.0 * std::sqrt(a * b), (a - b) * p.g_mod);
    if (ms.alpha < 0.0) ms.alpha += std::numbers::pi;
    return ms;
}

std::vector<MeasurementSetting> optimal_settings(Parameter param, const AncillaSpec& spec, const SourceParams& p) {
    auto f = spec.diagonal();
    if (!f) throw InvalidArgument("teleportation needs a diagonal ancilla (fixed total photon number)");
    const int big_n = static_cast<int>(f->size()) - 1;
    std::vector<MeasurementSetting> out;
    for (int n = 1; n <= big_n; ++n) out.push_back(optimal_settings(param, conditional_state(*f, p, n), p));
    return out;
}

namespace {

void fill_ratios(FisherReport& r, const SourceParams& p) {
    if (p.g_mod < 1.0) r.ratio_gmod = r.f_gmod / optimal_qfi_value(p, Parameter::g_mod);
    if (p.g_mod > 0.0) r.ratio_theta = r.f_theta / optimal_qfi_value(p, Parameter::theta);
}

// sum over +- of (dP)^2 / P with P = h (1 pm x), dP = pm h dx.
double binary_fi(double half, double x, double dx) {
    double s = 0.0;
    for (double sign : {1.0, -1.0}) {
        const double prob = half * (1.0 + sign * x);
        if (prob <= 0.0) continue;
        s += (half * dx) * (half * dx) / prob;
    }
    return s;
}

FisherReport fi_closed(const std::vector<Complex>& f, const SourceParams& p,
                       std::span<const MeasurementSetting> s_gmod, std::span<const MeasurementSetting> s_theta) {
    p.validate();
    if (p.epsilon > kFirstOrderEpsilonLimit)
        throw InvalidArgument("Fisher information is first order in eps; need eps <= 0.05");
    const int big_n = static_cast<int>(f.size()) - 1;
    if (static_cast<int>(s_gmod.size()) != big_n || static_cast<int>(s_theta.size()) != big_n)
        throw ShapeError("need one measurement setting per sector 1..N");
    FisherReport r;
    for (int n = 1; n <= big_n; ++n) {
        const ConditionalState cs = conditional_state(f, p, n);
        const double half = p.epsilon * cs.weight / 2.0;
        const SectorResponse tg = sector_response(cs, s_gmod[static_cast<std::size_t>(n - 1)], p);
        const SectorResponse tt = sector_response(cs, s_theta[static_cast<std::size_t>(n - 1)], p);
        r.f_gmod += binary_fi(half, tg.x, tg.dx_gmod);
        r.f_theta += binary_fi(half, tt.x, tt.dx_theta);
    }
    fill_ratios(r, p);
    return r;
}

}  // namespace

FisherReport fisher_information(const AncillaSpec& spec, const SourceParams& p,
                                std::span<const MeasurementSetting> settings) {
    auto f = spec.diagonal();
    if (!f) throw InvalidArgument("teleportation needs a diagonal ancilla (fixed total photon number)");
    return fi_closed(*f, p, settings, settings);
}

FisherReport fisher_information(const AncillaSpec& spec, const SourceParams& p) {
    auto f = spec.diagonal();
    if (!f) throw InvalidArgument("teleportation needs a diagonal ancilla (fixed total photon number)");
    auto sg = optimal_settings(Parameter::g_mod, spec, p);
    auto st = optimal_settings(Parameter::theta, spec, p);
    return fi_closed(*f, p, sg, st);
}

FisherReport fisher_information_pipeline(const PipelineResult& pipe, const SourceParams& p,
                                         std::span<const MeasurementSetting> settings_gmod,
                                         std::span<const MeasurementSetting> settings_theta) {
    p.validate();
    const int big_n = pipe.photons;
    if (static_cast<int>(settings_gmod.size()) != big_n || static_cast<int>(settings_theta.size()) != big_n)
        throw ShapeError("need one measurement setting per sector 1..N");
    const Eigen::Matrix2cd rho = source_first_order(p);
    const Eigen::Matrix2cd d_gmod = source_first_order_derivative(p, Parameter::g_mod);
    const Eigen::Matrix2cd d_theta = source_first_order_derivative(p, Parameter::theta);
    auto fold = [&](const std::array<Eigen::Matrix2cd, 4>& g, const Eigen::Matrix2cd& coeff) {
        Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out += coeff(i, j) * g[static_cast<std::size_t>(2 * i + j)];
        return Eigen::Matrix2cd(p.epsilon * out);
    };
    auto fi = [&](const Eigen::Matrix2cd& b, const Eigen::Matrix2cd& db, const MeasurementSetting& ms) {
        auto [plus, minus] = measurement_kets(ms);
        double s = 0.0;
        for (const auto& k : {plus, minus}) {
            const double prob = (k.adjoint() * b * k)(0, 0).real();
            const double dp = (k.adjoint() * db * k)(0, 0).real();
            if (prob > 0.0) s += dp * dp / prob;
        }
        return s;
    };
    FisherReport r;
    for (int n = 1; n <= big_n; ++n) {
        const auto& g = pipe.gram[static_cast<std::size_t>(n)];
        const Eigen::Matrix2cd b = fold(g, rho);
        r.f_gmod += fi(b, fold(g, d_gmod), settings_gmod[static_cast<std::size_t>(n - 1)]);
        r.f_theta += fi(b, fold(g, d_theta), settings_theta[static_cast<std::size_t>(n - 1)]);
    }
    fill_ratios(r, p);
    return r;
}

double failure_probability(const AncillaSpec& spec) {
    spec.validate();
    auto f = spec.diagonal();
    if (!f) throw InvalidArgument("teleportation needs a diagonal ancilla (fixed total photon number)");
    return (std::norm(f->front()) + std::norm(f->back())) / 2.0;
}

}  // namespace ssrt
