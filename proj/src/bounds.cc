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

#include "ssrt/bounds.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "ssrt/error.h"
#include "ssrt/parallel.h"
#include "ssrt/rng.h"

namespace ssrt {

void Distribution::validate() const {
    if (weights.empty()) throw InvalidArgument("distribution needs at least one weight");
    double s = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidArgument("distribution weights must be non-negative");
        s += w;
    }
    if (std::abs(s - 1.0) > 1e-12) throw InvalidArgument("distribution weights must sum to 1");
}

double bound_max_photons(int n) {
    if (n < 0) throw InvalidArgument("photon number must be non-negative");
    return std::cos(std::numbers::pi / (n + 2.0));
}

double bound_mean_photons(double mean_n) {
    if (!(mean_n >= 0.0)) throw InvalidArgument("mean photon number must be non-negative");
    return std::cos(std::numbers::pi / (mean_n + 2.0));
}

double small_photon_bound(double mean_n) {
    if (!(mean_n >= 0.0)) throw InvalidArgument("mean photon number must be non-negative");
    return std::numbers::pi / 4.0 * mean_n;
}

double asymptotic_bound(int k) {
    if (k < 3) throw InvalidArgument("asymptotic bound needs k >= 3");
    return 1.0 - std::numbers::pi * std::numbers::pi / (static_cast<double>(k) * k);
}

EigenPair tridiag_max_eig(int k) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    EigenPair out;
    const double a = std::numbers::pi / (k + 2.0);
    out.eigenvalue = 2.0 * std::cos(a);
    out.vector.weights.resize(static_cast<std::size_t>(k) + 1);
    double s = 0.0;
    for (int i = 0; i <= k; ++i) {
        double v = std::sin((i + 1) * a);
        out.vector.weights[static_cast<std::size_t>(i)] = v * v;
        s += v * v;
    }
    // s equals (k + 2) / 2 analytically; dividing by the computed sum keeps the
    // weights on the simplex to rounding.
    for (double& w : out.vector.weights) w /= s;
    return out;
}

double sqrt_product_sum(const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += std::sqrt(x[i] * x[i - 1]);
    return s;
}

double harmonic_sum(const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        double d = x[i] + x[i - 1];
        if (d > 0.0) s += 2.0 * x[i] * x[i - 1] / d;
    }
    return s;
}

std::vector<double> harmonic_sum_gradient(const std::vector<double>& x) {
    std::vector<double> g(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        double d = x[i] + x[i - 1];
        if (d <= 0.0) {
            g[i] += 2.0;  // one-sided limit along the axis
            g[i - 1] += 2.0;
            continue;
        }
        g[i] += 2.0 * x[i - 1] * x[i - 1] / (d * d);
        g[i - 1] += 2.0 * x[i] * x[i] / (d * d);
    }
    return g;
}

MaxResult maximize_sqrt_product(int k) {
    EigenPair ep = tridiag_max_eig(k);
    MaxResult r;
    r.value = sqrt_product_sum(ep.vector.weights);
    r.argmax = ep.vector;
    return r;
}

std::string to_string(StepRule r) {
    return r == StepRule::exponentiated_gradient ? "exponentiated_gradient" : "projected_gradient";
}

StepRule parse_step_rule(const std::string& name) {
    if (name == "exponentiated_gradient") return StepRule::exponentiated_gradient;
    if (name == "projected_gradient") return StepRule::projected_gradient;
    throw InvalidArgument("unknown step rule '" + name + "'");
}

void OptimizerConfig::validate() const {
    if (restarts < 1) throw InvalidArgument("restarts must be >= 1");
    if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
}

double simplex_stationarity(const std::vector<double>& x) {
    std::vector<double> g = harmonic_sum_gradient(x);
    double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    double s = 0.0;
    for (double v : g) s += (v - mean) * (v - mean);
    return std::sqrt(s);
}

namespace {

std::vector<double> project_to_simplex(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, tau = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cum += u[i];
        double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) tau = t;
    }
    for (double& x : v) x = std::max(0.0, x - tau);
    return v;
}

void renormalize(std::vector<double>& x) {
    double s = std::accumulate(x.begin(), x.end(), 0.0);
    for (double& v : x) v /= s;
}

// One ascent step with backtracking; returns false when no step improves S.
bool first_order_step(std::vector<double>& x, StepRule rule, double& eta) {
    const double s0 = harmonic_sum(x);
    const std::vector<double> g = harmonic_sum_gradient(x);
    for (int tries = 0; tries < 60; ++tries) {
        std::vector<double> y(x.size());
        if (rule == StepRule::exponentiated_gradient) {
            double gmax = *std::max_element(g.begin(), g.end());
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * std::exp(eta * (g[i] - gmax));
            renormalize(y);
        } else {
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + eta * g[i];
            y = project_to_simplex(y);
        }
        if (harmonic_sum(y) > s0) {
            x = std::move(y);
            eta *= 1.5;
            return true;
        }
        eta *= 0.5;
    }
    return false;
}

// Damped Newton on the KKT system of max S(x) s.t. sum x = 1, staying in the
// positive orthant. Returns false if a step could not be taken.
bool newton_step(std::vector<double>& x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    const std::vector<double> g = harmonic_sum_gradient(x);
    for (Eigen::Index i = 1; i < n; ++i) {
        const double a = x[static_cast<std::size_t>(i)];
        const double b = x[static_cast<std::size_t>(i - 1)];
        const double d = a + b;
        if (d <= 0.0) return false;
        const double d3 = d * d * d;
        kkt(i, i) += -4.0 * b * b / d3;
        kkt(i - 1, i - 1) += -4.0 * a * a / d3;
        kkt(i, i - 1) += 4.0 * a * b / d3;
        kkt(i - 1, i) += 4.0 * a * b / d3;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        kkt(i, n) = 1.0;
        kkt(n, i) = 1.0;
        rhs(i) = -g[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    if (!sol.allFinite()) return false;
    double step = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double dx = sol(i);
        if (dx < 0.0) step = std::min(step, 0.9 * x[static_cast<std::size_t>(i)] / -dx);
    }
    const double s0 = harmonic_sum(x);
    for (int tries = 0; tries < 40; ++tries) {
        std::vector<double> y(x.size());
        for (Eigen::Index i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + step * sol(i);
        renormalize(y);
        if (harmonic_sum(y) >= s0 - 1e-15) {
            x = std::move(y);
            return true;
        }
        step *= 0.5;
    }
    return false;
}

MaxResult run_restart(int k, const OptimizerConfig& cfg, int restart) {
    std::vector<double> x;
    if (restart == 0) {
        x = tridiag_max_eig(k).vector.weights;
    } else {
        auto eng = stream_engine(cfg.seed, static_cast<std::uint64_t>(restart));
        std::exponential_distribution<double> expo(1.0);
        for (int i = 0; i <= k; ++i) x.push_back(expo(eng) + 1e-12);
        renormalize(x);
    }
    MaxResult r;
    double eta = 1.0;
    int it = 0;
    const double coarse = std::max(cfg.tol, 1e-6);
    for (; it < cfg.max_iters && simplex_stationarity(x) > coarse; ++it)
        if (!first_order_step(x, cfg.step_rule, eta)) break;
    for (int polish = 0; polish < 100 && simplex_stationarity(x) > cfg.tol && it < cfg.max_iters; ++polish, ++it)
        if (!newton_step(x)) break;
    r.value = harmonic_sum(x);
    r.argmax.weights = x;
    r.stationarity = simplex_stationarity(x);
    r.iterations = it;
    r.warning = r.stationarity > cfg.tol;
    return r;
}

}  // namespace

MaxResult maximize_h_simplex(int k, const OptimizerConfig& cfg) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    cfg.validate();
    std::vector<MaxResult> runs(static_cast<std::size_t>(cfg.restarts));
    parallel_for(runs.size(), [&](std::size_t i) { runs[i] = run_restart(k, cfg, static_cast<int>(i)); });
    std::size_t best = 0;
    bool any_converged = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!runs[i].warning) any_converged = true;
        if (runs[i].value > runs[best].value) best = i;
    }
    MaxResult out = runs[best];
    out.warning = runs[best].warning;
    (void)any_converged;
    return out;
}

}  // namespace ssrt
