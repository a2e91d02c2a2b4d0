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

#include "ssrt/estimation.h"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <numbers>
#include <random>
#include <string>

#include "ssrt/error.h"
#include "ssrt/parallel.h"
#include "ssrt/rng.h"

namespace ssrt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kGrid = 201;

double wrap_angle(double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0.0 ? x + kTwoPi : x;
}

// (-pi, pi]
double wrap_centered(double x) {
    x = wrap_angle(x);
    return x > std::numbers::pi ? x - kTwoPi : x;
}

std::vector<Complex> diagonal_or_throw(const AncillaSpec& spec) {
    auto f = spec.diagonal();
    if (!f) throw InvalidArgument("estimation needs a diagonal ancilla (fixed total photon number)");
    return *f;
}

// Sector data with everything that does not depend on (|g|, theta) folded in.
struct SectorModel {
    int n = 0;
    double bias = 0.0;   // cos(alpha)(a - b)/w
    double coh = 0.0;    // sin(alpha) 2 sqrt(ab)/w
    double shift = 0.0;  // phi - delta
    std::int64_t plus = 0;
    std::int64_t minus = 0;
};

std::vector<SectorModel> build_models(const std::vector<Complex>& f, std::span<const SettingData> data) {
    const int big_n = static_cast<int>(f.size()) - 1;
    std::vector<SectorModel> out;
    for (const auto& d : data) {
        if (static_cast<int>(d.settings.size()) != big_n) throw ShapeError("need one measurement setting per sector 1..N");
        for (int n = 1; n <= big_n; ++n) {
            const Complex fn = f[static_cast<std::size_t>(n)];
            const Complex fp = f[static_cast<std::size_t>(n - 1)];
            const double a = std::norm(fn);
            const double b = std::norm(fp);
            const double w = a + b;
            if (w <= 0.0) continue;
            const MeasurementSetting& ms = d.settings[static_cast<std::size_t>(n - 1)];
            SectorModel m;
            m.n = n;
            m.bias = std::cos(ms.alpha) * (a - b) / w;
            m.coh = std::sin(ms.alpha) * 2.0 * std::sqrt(a * b) / w;
            m.shift = std::arg(fn * std::conj(fp)) - ms.delta;
            m.plus = d.counts.count(n, +1);
            m.minus = d.counts.count(n, -1);
            if (m.plus + m.minus > 0) out.push_back(m);
        }
    }
    return out;
}

double log_likelihood(const std::vector<SectorModel>& models, double g, double theta) {
    double ll = 0.0;
    for (const auto& m : models) {
        const double x = m.bias + m.coh * g * std::cos(theta + m.shift);
        if (m.plus > 0) {
            if (1.0 + x <= 0.0) return -std::numeric_limits<double>::infinity();
            ll += static_cast<double>(m.plus) * std::log1p(x);
        }
        if (m.minus > 0) {
            if (1.0 - x <= 0.0) return -std::numeric_limits<double>::infinity();
            ll += static_cast<double>(m.minus) * std::log1p(-x);
        }
    }
    return ll;
}

struct JointContext {
    const std::vector<SectorModel>* models;
};

double negative_ll_joint(const gsl_vector* v, void* params) {
    const auto* ctx = static_cast<const JointContext*>(params);
    const double g = gsl_vector_get(v, 0);
    const double theta = gsl_vector_get(v, 1);
    const double gc = std::clamp(g, 0.0, 1.0);
    const double ll = log_likelihood(*ctx->models, gc, theta);
    if (!std::isfinite(ll)) return 1e300;
    return -ll + 1e6 * (g - gc) * (g - gc);
}

struct ThetaContext {
    const std::vector<SectorModel>* models;
    double g;
};

double negative_ll_theta(double theta, void* params) {
    const auto* ctx = static_cast<const ThetaContext*>(params);
    const double ll = log_likelihood(*ctx->models, ctx->g, theta);
    return std::isfinite(ll) ? -ll : 1e300;
}

// GSL's default handler aborts; every call site here checks return codes.
void quiet_gsl() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

bool informative(const std::vector<SectorModel>& models) {
    for (const auto& m : models)
        if (m.coh > 1e-12) return true;
    return false;
}

// If every informative sector sees theta through the same phase (mod pi), the
// likelihood is symmetric about the extrema of cos(theta + shift) and theta is
// only identified on a half period. Returns the start of the half period where
// theta + shift lies in [-pi, 0], which holds the truth for quadrature settings.
std::optional<double> single_branch(const std::vector<SectorModel>& models) {
    std::optional<double> s;
    for (const auto& m : models) {
        if (m.coh <= 1e-12) continue;
        if (!s) {
            s = m.shift;
            continue;
        }
        const double d = std::remainder(m.shift - *s, std::numbers::pi);
        if (std::abs(d) > 1e-9) return std::nullopt;
    }
    if (!s) return std::nullopt;
    return -*s - std::numbers::pi;
}

}  // namespace

std::int64_t OutcomeCounts::detected() const {
    std::int64_t s = 0;
    for (const auto& [_, c] : counts) s += c;
    return s;
}

std::int64_t OutcomeCounts::count(int n, int sign) const {
    auto it = counts.find({n, sign});
    return it == counts.end() ? 0 : it->second;
}

OutcomeCounts sample_outcomes(const AncillaSpec& spec, const SourceParams& p,
                              std::span<const MeasurementSetting> settings, std::int64_t trials, std::uint64_t seed,
                              std::uint64_t stream) {
    spec.validate();
    p.validate();
    if (trials < 0) throw InvalidArgument("trial count must be non-negative");
    const std::vector<Complex> f = diagonal_or_throw(spec);
    const int big_n = static_cast<int>(f.size()) - 1;
    if (static_cast<int>(settings.size()) != big_n) throw ShapeError("need one measurement setting per sector 1..N");

    std::vector<std::pair<std::pair<int, int>, double>> cats;
    for (int n = 1; n <= big_n; ++n) {
        auto [pp, pm] = measurement_probs(conditional_state(f, p, n), settings[static_cast<std::size_t>(n - 1)], p);
        cats.push_back({{n, +1}, pp});
        cats.push_back({{n, -1}, pm});
    }
    cats.push_back({{0, 0}, p.epsilon * conditional_state(f, p, 0).weight});
    cats.push_back({{big_n + 1, 0}, p.epsilon * conditional_state(f, p, big_n + 1).weight});
    double total = 1.0 - p.epsilon;
    for (const auto& [_, q] : cats) {
        if (q < -1e-15) throw ConsistencyError("negative outcome probability");
        total += q;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ConsistencyError("outcome probabilities sum to " + std::to_string(total) + ", expected 1");

    OutcomeCounts oc;
    oc.trials = trials;
    oc.seed = seed;
    oc.stream = stream;
    if (trials == 0) return oc;
    auto eng = stream_engine(seed, stream);
    std::int64_t left = trials;
    double mass = total;
    for (const auto& [key, q] : cats) {
        std::int64_t k = 0;
        const double prob = std::clamp(std::max(q, 0.0) / mass, 0.0, 1.0);
        if (left > 0 && prob > 0.0) {
            std::binomial_distribution<std::int64_t> bin(left, prob);
            k = bin(eng);
        }
        oc.counts[key] = k;
        left -= k;
        mass -= std::max(q, 0.0);
        if (mass <= 0.0) mass = std::numeric_limits<double>::min();
    }
    oc.no_detection = left;
    return oc;
}

FitResult mle_fit(const AncillaSpec& spec, std::span<const SettingData> data) {
    quiet_gsl();
    const std::vector<SectorModel> models = build_models(diagonal_or_throw(spec), data);
    FitResult r;
    if (!informative(models)) {
        r.wide_interval = true;
        return r;
    }
    double best = -std::numeric_limits<double>::infinity();
    double bg = 0.5, bt = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        const double g = static_cast<double>(i) / (kGrid - 1);
        for (int j = 0; j < kGrid; ++j) {
            const double t = kTwoPi * j / kGrid;
            const double ll = log_likelihood(models, g, t);
            if (ll > best) {
                best = ll;
                bg = g;
                bt = t;
            }
        }
    }

    JointContext ctx{&models};
    gsl_multimin_function fn{&negative_ll_joint, 2, &ctx};
    gsl_vector* x = gsl_vector_alloc(2);
    gsl_vector* step = gsl_vector_alloc(2);
    gsl_vector_set(x, 0, bg);
    gsl_vector_set(x, 1, bt);
    gsl_vector_set(step, 0, 1.0 / (kGrid - 1));
    gsl_vector_set(step, 1, kTwoPi / kGrid);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    for (int it = 0; it < 2000; ++it) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-6) == GSL_SUCCESS) break;
    }
    const double g_fit = gsl_vector_get(s->x, 0);
    const double t_fit = gsl_vector_get(s->x, 1);
    const double val = s->fval;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);

    if (-val >= best) {
        r.g_hat = std::clamp(g_fit, 0.0, 1.0);
        r.theta_hat = wrap_angle(t_fit);
        r.log_likelihood = -val;
    } else {
        r.g_hat = bg;
        r.theta_hat = bt;
        r.log_likelihood = best;
    }
    r.wide_interval = r.g_hat < 1e-3;
    return r;
}

FitResult mle_fit_theta(const AncillaSpec& spec, std::span<const SettingData> data, double g_known) {
    if (!(g_known >= 0.0 && g_known <= 1.0)) throw InvalidArgument("|g| must lie in [0, 1]");
    quiet_gsl();
    const std::vector<SectorModel> models = build_models(diagonal_or_throw(spec), data);
    FitResult r;
    r.g_hat = g_known;
    if (!informative(models) || g_known < 1e-3) {
        r.wide_interval = true;
        return r;
    }
    const std::optional<double> branch = single_branch(models);
    const double start = branch.value_or(0.0);
    const double span = branch ? std::numbers::pi : kTwoPi;
    double best = -std::numeric_limits<double>::infinity();
    double bt = start;
    for (int j = 0; j < kGrid; ++j) {
        const double t = start + span * j / (branch ? kGrid - 1 : kGrid);
        const double ll = log_likelihood(models, g_known, t);
        if (ll > best) {
            best = ll;
            bt = t;
        }
    }
    ThetaContext ctx{&models, g_known};
    gsl_function fn{&negative_ll_theta, &ctx};
    const double h = span / kGrid;
    double lo = bt - h, hi = bt + h;
    if (branch) {
        lo = std::max(lo, start);
        hi = std::min(hi, start + span);
    }
    r.theta_hat = bt;
    r.log_likelihood = best;
    if (negative_ll_theta(bt, &ctx) < negative_ll_theta(lo, &ctx) &&
        negative_ll_theta(bt, &ctx) < negative_ll_theta(hi, &ctx)) {
        gsl_min_fminimizer* s = gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent);
        if (gsl_min_fminimizer_set(s, &fn, bt, lo, hi) == GSL_SUCCESS) {
            for (int it = 0; it < 200; ++it) {
                if (gsl_min_fminimizer_iterate(s) != GSL_SUCCESS) break;
                lo = gsl_min_fminimizer_x_lower(s);
                hi = gsl_min_fminimizer_x_upper(s);
                if (gsl_min_test_interval(lo, hi, 1e-9, 0.0) == GSL_SUCCESS) break;
            }
            r.theta_hat = wrap_angle(gsl_min_fminimizer_x_minimum(s));
            r.log_likelihood = -gsl_min_fminimizer_f_minimum(s);
        }
        gsl_min_fminimizer_free(s);
    }
    return r;
}

Eigen::Matrix2d fisher_matrix(const AncillaSpec& spec, const SourceParams& p,
                              std::span<const MeasurementSetting> settings) {
    p.validate();
    const std::vector<Complex> f = diagonal_or_throw(spec);
    const int big_n = static_cast<int>(f.size()) - 1;
    if (static_cast<int>(settings.size()) != big_n) throw ShapeError("need one measurement setting per sector 1..N");
    Eigen::Matrix2d fm = Eigen::Matrix2d::Zero();
    for (int n = 1; n <= big_n; ++n) {
        const ConditionalState cs = conditional_state(f, p, n);
        const SectorResponse t = sector_response(cs, settings[static_cast<std::size_t>(n - 1)], p);
        const double half = p.epsilon * cs.weight / 2.0;
        const Eigen::Vector2d dx(t.dx_gmod, t.dx_theta);
        for (double sign : {1.0, -1.0}) {
            const double prob = half * (1.0 + sign * t.x);
            if (prob <= 0.0) continue;
            fm += (half * half / prob) * dx * dx.transpose();
        }
    }
    return fm;
}

std::pair<std::vector<MeasurementSetting>, std::vector<MeasurementSetting>> two_settings(const AncillaSpec& spec,
                                                                                       const SourceParams& p) {
    std::vector<MeasurementSetting> quad = optimal_settings(Parameter::theta, spec, p);
    std::vector<MeasurementSetting> in_phase = quad;
    for (auto& ms : in_phase) ms.delta -= std::numbers::pi / 2.0;
    return {in_phase, quad};
}

EstimateReport run_monte_carlo(const AncillaSpec& spec, const SourceParams& p, const MonteCarloConfig& cfg) {
    spec.validate();
    p.validate();
    if (cfg.repetitions < 2) throw InvalidArgument("need at least two repetitions");
    if (cfg.trials < 1) throw InvalidArgument("need at least one trial per setting");
    const auto [in_phase, quad] = two_settings(spec, p);
    const bool joint = cfg.mode == EstimationMode::joint;
    quiet_gsl();

    EstimateReport rep;
    rep.fits.resize(static_cast<std::size_t>(cfg.repetitions));
    parallel_for(rep.fits.size(), [&](std::size_t r) {
        std::vector<SettingData> data;
        const auto base = static_cast<std::uint64_t>(2 * r);
        if (joint) data.push_back({in_phase, sample_outcomes(spec, p, in_phase, cfg.trials, cfg.seed, base)});
        data.push_back({quad, sample_outcomes(spec, p, quad, cfg.trials, cfg.seed, base + 1)});
        rep.fits[r] = joint ? mle_fit(spec, data) : mle_fit_theta(spec, data, p.g_mod);
    });

    const double m = static_cast<double>(cfg.repetitions);
    double sg = 0.0, ss = 0.0, sc = 0.0;
    for (const auto& f : rep.fits) {
        sg += f.g_hat;
        ss += std::sin(f.theta_hat);
        sc += std::cos(f.theta_hat);
        if (f.wide_interval) ++rep.wide_intervals;
    }
    rep.g_hat = sg / m;
    rep.theta_hat = wrap_angle(std::atan2(ss, sc));
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& f : rep.fits) {
        const Eigen::Vector2d d(f.g_hat - rep.g_hat, wrap_centered(f.theta_hat - rep.theta_hat));
        cov += d * d.transpose();
    }
    rep.covariance = cov / (m - 1.0);

    Eigen::Matrix2d fm = fisher_matrix(spec, p, quad);
    if (joint) fm += fisher_matrix(spec, p, in_phase);
    fm *= static_cast<double>(cfg.trials);
    if (joint) {
        if (std::abs(fm.determinant()) > 0.0) rep.crb = fm.inverse();
        rep.ratio_gmod = rep.crb(0, 0) > 0.0 ? rep.covariance(0, 0) / rep.crb(0, 0) : 0.0;
    } else if (fm(1, 1) > 0.0) {
        rep.crb(1, 1) = 1.0 / fm(1, 1);
    }
    rep.ratio = rep.crb(1, 1) > 0.0 ? rep.covariance(1, 1) / rep.crb(1, 1) : 0.0;
    return rep;
}

}  // namespace ssrt
