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

#include "ssrt/ancilla.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "ssrt/error.h"
#include "ssrt/qfi.h"

namespace ssrt {

namespace {

const std::vector<std::pair<AncillaKind, std::string>>& kind_names() {
    static const std::vector<std::pair<AncillaKind, std::string>> names = {
        {AncillaKind::gjc, "gjc"},
        {AncillaKind::n_copy_spe, "n_copy_spe"},
        {AncillaKind::klm, "klm"},
        {AncillaKind::tri_intensity, "tri_intensity"},
        {AncillaKind::tri_amplitude, "tri_amplitude"},
        {AncillaKind::optimal_klm, "optimal_klm"},
        {AncillaKind::tmsv, "tmsv"},
        {AncillaKind::tmsv_with_reference, "tmsv_with_reference"},
        {AncillaKind::coherent_pair, "coherent_pair"},
        {AncillaKind::tpe, "tpe"},
        {AncillaKind::noon, "noon"},
        {AncillaKind::custom, "custom"},
    };
    return names;
}

const std::vector<std::pair<ModeLayout, std::string>>& layout_names() {
    static const std::vector<std::pair<ModeLayout, std::string>> names = {
        {ModeLayout::single_mode_pair, "single_mode_pair"},
        {ModeLayout::one_photon_per_mode, "one_photon_per_mode"},
        {ModeLayout::permuted_superposition, "permuted_superposition"},
    };
    return names;
}

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Poisson pmf with mean lambda, up to the smallest cutoff whose upper tail is
// below `tail`.
std::vector<double> poisson_weights(double lambda, double tail) {
    std::vector<double> w;
    double kept = 0.0;
    for (int n = 0;; ++n) {
        double p = lambda == 0.0 ? (n == 0 ? 1.0 : 0.0)
                                 : std::exp(n * std::log(lambda) - lambda - std::lgamma(n + 1.0));
        w.push_back(p);
        kept += p;
        if (1.0 - kept < tail && static_cast<double>(n) >= lambda) break;
        if (n > 100000) throw CapacityError("Poisson truncation did not converge");
    }
    return w;
}

// (1 - t^2) t^{2n} for t = tanh r, truncated at tail weight `tail`.
std::vector<double> thermal_pair_weights(double r, double tail) {
    const double t2 = std::tanh(r) * std::tanh(r);
    std::vector<double> w;
    double p = 1.0 - t2;
    double tail_left = t2;  // t^{2(n+1)}
    for (int n = 0;; ++n) {
        w.push_back(p);
        if (tail_left < tail) break;
        p *= t2;
        tail_left *= t2;
        if (n > 100000) throw CapacityError("squeezed-state truncation did not converge");
    }
    return w;
}

void require_photons(int n, int min) {
    if (n < min) throw InvalidArgument("photon number must be >= " + std::to_string(min));
    if (n > kMaxCatalogPhotons)
        throw CapacityError("photon number " + std::to_string(n) + " exceeds catalog limit " +
                            std::to_string(kMaxCatalogPhotons));
}

std::vector<Complex> normalized_from_magnitudes(const std::vector<double>& mags) {
    double s = 0.0;
    for (double m : mags) s += m * m;
    if (!(s > 0.0)) throw InvalidArgument("profile has no weight");
    std::vector<Complex> f;
    for (double m : mags) f.emplace_back(m / std::sqrt(s));
    return f;
}

void fill_cap(AncillaSpec& spec) {
    spec.photon_cap = 0;
    for (const auto& [l, _] : spec.amplitudes) spec.photon_cap = std::max(spec.photon_cap, l.n_a + l.n_b);
}

}  // namespace

std::string to_string(AncillaKind kind) {
    for (const auto& [k, n] : kind_names())
        if (k == kind) return n;
    return "custom";
}

std::string to_string(ModeLayout layout) {
    for (const auto& [k, n] : layout_names())
        if (k == layout) return n;
    return "single_mode_pair";
}

AncillaKind parse_ancilla_kind(const std::string& name) {
    for (const auto& [k, n] : kind_names())
        if (n == name) return k;
    throw InvalidArgument("unknown ancilla kind '" + name + "'");
}

ModeLayout parse_mode_layout(const std::string& name) {
    for (const auto& [k, n] : layout_names())
        if (n == name) return k;
    throw InvalidArgument("unknown mode layout '" + name + "'");
}

// ------------------------------------------------------------- AncillaSpec

double AncillaSpec::norm2() const {
    double s = 0.0;
    for (const auto& [_, a] : amplitudes) s += std::norm(a);
    return s;
}

void AncillaSpec::validate() const {
    for (const auto& [l, _] : amplitudes) {
        if (l.n_a < 0 || l.n_b < 0) throw InvalidArgument("sector labels must be non-negative");
        if (l.n_a + l.n_b > photon_cap)
            throw InvalidArgument("sector (" + std::to_string(l.n_a) + "," + std::to_string(l.n_b) +
                                  ") exceeds photon cap " + std::to_string(photon_cap));
    }
    double n2 = norm2();
    if (std::abs(n2 - 1.0) > kNormalizationTolerance)
        throw NormalizationError("ancilla amplitudes have squared norm " + std::to_string(n2) + ", expected 1");
}

Complex AncillaSpec::amplitude(int n, int m) const {
    auto it = amplitudes.find({n, m});
    return it == amplitudes.end() ? Complex(0.0) : it->second;
}

std::optional<std::vector<Complex>> AncillaSpec::diagonal() const {
    if (amplitudes.empty()) return std::nullopt;
    const int total = amplitudes.begin()->first.n_a + amplitudes.begin()->first.n_b;
    for (const auto& [l, _] : amplitudes)
        if (l.n_a + l.n_b != total) return std::nullopt;
    std::vector<Complex> f(static_cast<std::size_t>(total) + 1, 0.0);
    for (const auto& [l, a] : amplitudes) f[static_cast<std::size_t>(l.n_a)] = a;
    return f;
}

double AncillaSpec::mean_photons() const {
    double s = 0.0;
    for (const auto& [l, a] : amplitudes) s += std::norm(a) * (l.n_a + l.n_b);
    return s;
}

int AncillaSpec::modes_per_site() const {
    if (layout == ModeLayout::single_mode_pair) return 1;
    int k = 1;
    for (const auto& [l, _] : amplitudes) k = std::max(k, l.n_a + l.n_b);
    return k;
}

SparseKet AncillaSpec::materialize() const {
    int top = 0;
    for (const auto& [l, _] : amplitudes) top = std::max(top, l.n_a + l.n_b);
    if (top > kMaxPhotons)
        throw CapacityError("ancilla support reaches " + std::to_string(top) + " photons; at most " +
                            std::to_string(kMaxPhotons) + " can be materialized");
    const int k = modes_per_site();
    if (k > kMaxModesPerSite)
        throw CapacityError("layout needs " + std::to_string(k) + " modes per site; limit is " +
                            std::to_string(kMaxModesPerSite));
    SparseKet ket(k, k);
    for (const auto& [l, f] : amplitudes) {
        const int n = l.n_a;
        const int m = l.n_b;
        switch (layout) {
            case ModeLayout::single_mode_pair:
                ket.add({OccupationVector({n}), OccupationVector({m})}, f);
                break;
            case ModeLayout::one_photon_per_mode: {
                std::vector<int> a(static_cast<std::size_t>(k), 0), b(static_cast<std::size_t>(k), 0);
                for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = 1;
                for (int i = n; i < n + m; ++i) b[static_cast<std::size_t>(i)] = 1;
                ket.add({OccupationVector(a), OccupationVector(b)}, f);
                break;
            }
            case ModeLayout::permuted_superposition: {
                const int pairs = n + m;
                const double amp = std::exp(-0.5 * log_choose(pairs, n));
                std::vector<int> pick(static_cast<std::size_t>(pairs), 0);
                std::fill(pick.begin(), pick.begin() + n, 1);
                std::sort(pick.begin(), pick.end());
                do {
                    std::vector<int> a(static_cast<std::size_t>(k), 0), b(static_cast<std::size_t>(k), 0);
                    for (int i = 0; i < pairs; ++i) (pick[static_cast<std::size_t>(i)] ? a : b)[static_cast<std::size_t>(i)] = 1;
                    ket.add({OccupationVector(a), OccupationVector(b)}, f * amp);
                } while (std::next_permutation(pick.begin(), pick.end()));
                break;
            }
        }
    }
    return ket;
}

AncillaSpec diagonal_spec(const std::vector<Complex>& f, ModeLayout layout, AncillaKind kind) {
    if (f.empty()) throw InvalidArgument("diagonal spec needs at least one amplitude");
    AncillaSpec spec;
    spec.kind = kind;
    spec.layout = layout;
    const int total = static_cast<int>(f.size()) - 1;
    for (int n = 0; n <= total; ++n)
        if (f[static_cast<std::size_t>(n)] != Complex(0.0)) spec.amplitudes[{n, total - n}] = f[static_cast<std::size_t>(n)];
    spec.photon_cap = total;
    return spec;
}

double squeezing_for_mean(double mean_photons) {
    if (mean_photons < 0.0) throw InvalidArgument("mean photon number must be non-negative");
    return std::asinh(std::sqrt(mean_photons / 2.0));
}

// ------------------------------------------------------------------- build

AncillaSpec build(AncillaKind kind, const BuildParams& p) {
    const int big_n = p.photons;
    std::vector<double> mags;
    ModeLayout layout = ModeLayout::one_photon_per_mode;
    switch (kind) {
        case AncillaKind::gjc:
            return diagonal_spec({std::sqrt(0.5), std::sqrt(0.5)}, ModeLayout::single_mode_pair, kind);
        case AncillaKind::n_copy_spe:
            require_photons(big_n, 1);
            for (int n = 0; n <= big_n; ++n) mags.push_back(std::exp(0.5 * (log_choose(big_n, n) - big_n * std::log(2.0))));
            layout = ModeLayout::permuted_superposition;
            break;
        case AncillaKind::klm:
            require_photons(big_n, 1);
            mags.assign(static_cast<std::size_t>(big_n) + 1, 1.0);
            break;
        case AncillaKind::tri_intensity:
        case AncillaKind::tri_amplitude:
            require_photons(big_n, 2);
            for (int n = 0; n <= big_n; ++n) {
                double tri = big_n / 2.0 - std::abs(big_n / 2.0 - n);
                mags.push_back(kind == AncillaKind::tri_intensity ? std::sqrt(tri) : tri);
            }
            break;
        case AncillaKind::optimal_klm:
            require_photons(big_n, 1);
            for (int n = 0; n <= big_n; ++n) mags.push_back(std::sin((n + 1) * std::numbers::pi / (big_n + 2)));
            break;
        case AncillaKind::tpe: {
            AncillaSpec s;
            s.kind = kind;
            s.layout = ModeLayout::permuted_superposition;
            s.amplitudes[{1, 1}] = 1.0;
            s.photon_cap = 2;
            return s;
        }
        case AncillaKind::noon: {
            require_photons(big_n, 1);
            AncillaSpec s;
            s.kind = kind;
            s.layout = ModeLayout::single_mode_pair;
            s.amplitudes[{big_n, 0}] = std::sqrt(0.5);
            s.amplitudes[{0, big_n}] = std::sqrt(0.5);
            s.photon_cap = big_n;
            return s;
        }
        case AncillaKind::tmsv: {
            if (p.squeezing < 0.0) throw InvalidArgument("squeezing must be non-negative");
            auto w = thermal_pair_weights(p.squeezing, kTruncationTail);
            double kept = 0.0;
            for (double x : w) kept += x;
            AncillaSpec s;
            s.kind = kind;
            s.layout = ModeLayout::single_mode_pair;
            for (std::size_t n = 0; n < w.size(); ++n)
                s.amplitudes[{static_cast<int>(n), static_cast<int>(n)}] = std::sqrt(w[n] / kept);
            s.truncation = static_cast<int>(w.size()) - 1;
            s.tail_weight = 1.0 - kept;
            fill_cap(s);
            return s;
        }
        case AncillaKind::coherent_pair: {
            if (p.alpha < 0.0) throw InvalidArgument("alpha must be non-negative");
            const double lambda = p.alpha * p.alpha;
            auto w = poisson_weights(lambda, kTruncationTail / 2.0);
            double kept1 = 0.0;
            for (double x : w) kept1 += x;
            AncillaSpec s;
            s.kind = kind;
            s.layout = ModeLayout::single_mode_pair;
            for (std::size_t n = 0; n < w.size(); ++n)
                for (std::size_t m = 0; m < w.size(); ++m) {
                    double a = std::sqrt(w[n] * w[m]) / kept1;
                    if (a > 0.0) s.amplitudes[{static_cast<int>(n), static_cast<int>(m)}] = a;
                }
            s.truncation = static_cast<int>(w.size()) - 1;
            s.tail_weight = 1.0 - kept1 * kept1;
            fill_cap(s);
            return s;
        }
        case AncillaKind::tmsv_with_reference: {
            if (p.squeezing < 0.0 || p.alpha < 0.0) throw InvalidArgument("squeezing and alpha must be non-negative");
            auto c = thermal_pair_weights(p.squeezing, kTruncationTail / 2.0);
            auto d = poisson_weights(p.alpha * p.alpha, kTruncationTail / 4.0);
            const int kc = static_cast<int>(c.size()) - 1;
            const int kd = static_cast<int>(d.size()) - 1;
            std::vector<double> w(static_cast<std::size_t>((kc + kd + 1) * (kc + kd + 1)), 0.0);
            const int side = kc + kd + 1;
            double kept = 0.0;
            for (int k = 0; k <= kc; ++k)
                for (int i = 0; i <= kd; ++i)
                    for (int j = 0; j <= kd; ++j) {
                        double x = c[static_cast<std::size_t>(k)] * d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(j)];
                        w[static_cast<std::size_t>((k + i) * side + (k + j))] += x;
                        kept += x;
                    }
            AncillaSpec s;
            s.kind = kind;
            s.layout = ModeLayout::single_mode_pair;
            for (int n = 0; n < side; ++n)
                for (int m = 0; m < side; ++m) {
                    double x = w[static_cast<std::size_t>(n * side + m)];
                    if (x > 0.0) s.amplitudes[{n, m}] = std::sqrt(x / kept);
                }
            s.truncation = side - 1;
            s.tail_weight = 1.0 - kept;
            fill_cap(s);
            return s;
        }
        case AncillaKind::custom:
            throw InvalidArgument("custom ancillas are built from JSON, not from the catalog");
    }
    return diagonal_spec(normalized_from_magnitudes(mags), layout, kind);
}

// ----------------------------------------------------------- closed ratios

double coherent_ratio_closed(double r) {
    if (r < 0.0) throw InvalidArgument("r must be non-negative");
    if (r < 1e-8) return r;  // 1 - (1 - e^{-2r})/(2r) = r - 2r^2/3 + ...
    return 1.0 - (-std::expm1(-2.0 * r)) / (2.0 * r);
}

double closed_ratio(AncillaKind kind, const BuildParams& p) {
    const int big_n = p.photons;
    switch (kind) {
        case AncillaKind::gjc:
            return 0.5;
        case AncillaKind::n_copy_spe:
        case AncillaKind::klm:
            require_photons(big_n, 1);
            return static_cast<double>(big_n) / (big_n + 1);
        case AncillaKind::tri_intensity: {
            require_photons(big_n, 2);
            if (big_n % 2 != 0) return qfi_ratio_closed(build(kind, p));
            double s = 0.0;
            for (int i = 1; i <= big_n / 2; ++i) s += 1.0 / (2 * i - 1);
            return 1.0 - 4.0 / (static_cast<double>(big_n) * big_n) * s;
        }
        case AncillaKind::tri_amplitude: {
            require_photons(big_n, 2);
            if (big_n % 2 != 0) return qfi_ratio_closed(build(kind, p));
            double s = 0.0;
            for (int i = 1; i <= big_n / 2; ++i) {
                double a = static_cast<double>(i) * i;
                double b = static_cast<double>(i - 1) * (i - 1);
                s += a * b / (a + b);
            }
            return 48.0 / (big_n * (static_cast<double>(big_n) * big_n + 2.0)) * s;
        }
        case AncillaKind::optimal_klm:
            return qfi_ratio_closed(build(kind, p));
        case AncillaKind::coherent_pair:
            return coherent_ratio_closed(p.alpha * p.alpha);
        case AncillaKind::tmsv:
        case AncillaKind::tpe:
            return 0.0;
        case AncillaKind::noon:
            require_photons(big_n, 1);
            return big_n == 1 ? 0.5 : 0.0;
        case AncillaKind::tmsv_with_reference:
        case AncillaKind::custom:
            break;
    }
    throw UnsupportedError("no closed-form ratio for ancilla kind '" + to_string(kind) + "'");
}

// ---------------------------------------------------------- FI closed forms

FisherPair ncopy_fi_closed(int n, double epsilon, double g_mod, double phi) {
    if (n < 1 || n > 5) throw UnsupportedError("N-copy closed forms exist for N = 1..5 only");
    if (g_mod < 0.0 || g_mod > 1.0) throw InvalidArgument("|g| must lie in [0, 1]");
    const double c = g_mod * std::cos(phi);
    const double s_half = std::sin(phi / 2.0);
    const double one_minus = (1.0 - g_mod) + 2.0 * g_mod * s_half * s_half;  // 1 - |g| cos(phi)
    const double one_minus_sq = one_minus * (1.0 + c);                      // 1 - |g|^2 cos^2(phi)
    double ratio = 0.0;  // common factor multiplying sin^2 or cos^2
    switch (n) {
        case 1:
            ratio = 0.5 / one_minus_sq;
            break;
        case 2:
            ratio = 3.0 / (one_minus * (5.0 + 4.0 * c));
            break;
        case 3:
            ratio = 3.0 * (9.0 + 7.0 * c) / (4.0 * one_minus_sq * (10.0 + 6.0 * c));
            break;
        case 4:
            ratio = 10.0 * (16.0 + 9.0 * c) / (one_minus * (13.0 + 12.0 * c) * (17.0 + 8.0 * c));
            break;
        case 5:
            ratio = 5.0 * (79.0 + 106.0 * c + 31.0 * c * c) / (one_minus_sq * (26.0 + 10.0 * c) * (20.0 + 16.0 * c));
            break;
    }
    const double sn = std::sin(phi);
    const double cs = std::cos(phi);
    return {ratio * cs * cs * epsilon, ratio * sn * sn * g_mod * g_mod * epsilon};
}

FisherPair cv_fi_closed(double epsilon, double g_mod, double r) {
    if (r < 0.0) throw InvalidArgument("r must be non-negative");
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    if (g_mod < 0.0 || g_mod > 1.0) throw InvalidArgument("|g| must lie in [0, 1]");
    const double e = epsilon;
    const double g2 = g_mod * g_mod;
    const double y = 2.0 * std::exp(-2.0 * r);
    const double f_theta = 2.0 * e * e * g2 / (2.0 * y + e * (2.0 + e - e * g2 + 2.0 * y));
    const double num = 2.0 * e * e *
                       (-e * (2.0 + e) * (2.0 + e) + e * e * e * g2 * g2 - 4.0 * (1.0 + e) * (2.0 + e) * y -
                        4.0 * (2.0 + e) * y * y);
    const double den = (e * (g2 - 1.0) - 2.0 * y) * (e * (-2.0 - e + e * g2) - 2.0 * (1.0 + e) * y) *
                       (e * e * (g2 - 1.0) - 4.0 * (1.0 + y) - 2.0 * e * (2.0 + y));
    return {num / den, f_theta};
}

// -------------------------------------------------------------------- JSON

AncillaSpec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("ancilla JSON does not parse: ") + e.what());
    }
    try {
        AncillaSpec s;
        s.kind = parse_ancilla_kind(j.value("kind", std::string("custom")));
        s.layout = parse_mode_layout(j.value("layout", std::string("single_mode_pair")));
        for (const auto& a : j.at("amplitudes")) {
            int n = a.at("n").get<int>();
            int m = a.at("m").get<int>();
            if (n < 0 || m < 0) throw InvalidArgument("sector labels must be non-negative");
            s.amplitudes[{n, m}] += Complex(a.value("re", 0.0), a.value("im", 0.0));
        }
        fill_cap(s);
        if (j.contains("photon_cap")) s.photon_cap = std::max(s.photon_cap, j.at("photon_cap").get<int>());
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed ancilla JSON: ") + e.what());
    }
}

std::string spec_to_json(const AncillaSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    j["layout"] = to_string(spec.layout);
    j["photon_cap"] = spec.photon_cap;
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& [l, a] : spec.amplitudes)
        amps.push_back({{"n", l.n_a}, {"m", l.n_b}, {"re", a.real()}, {"im", a.imag()}});
    j["amplitudes"] = amps;
    return j.dump();
}

}  // namespace ssrt
