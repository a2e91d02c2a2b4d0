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

#include "ssrt/fock.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ssrt/error.h"
#include "ssrt/rng.h"

namespace ssrt {

namespace {

double log_factorial_product(const std::vector<int>& occ) {
    double s = 0.0;
    for (int n : occ) s += std::lgamma(static_cast<double>(n) + 1.0);
    return s;
}

void check_modes(int modes) {
    if (modes < 0) throw InvalidArgument("negative mode count");
    if (modes > kMaxModesPerSite)
        throw CapacityError("at most " + std::to_string(kMaxModesPerSite) +
                            " modes per site are supported, got " + std::to_string(modes));
}

}  // namespace

OccupationVector::OccupationVector(std::vector<int> occupations) : occupations_(std::move(occupations)) {
    for (int n : occupations_)
        if (n < 0) throw InvalidArgument("occupation numbers must be non-negative");
}

OccupationVector OccupationVector::zeros(int modes) {
    if (modes < 0) throw InvalidArgument("negative mode count");
    return OccupationVector(std::vector<int>(static_cast<std::size_t>(modes), 0));
}

int OccupationVector::total() const {
    int t = 0;
    for (int n : occupations_) t += n;
    return t;
}

SectorLabel local_photon_numbers(const BipartiteFockState& state) {
    return {state.site_a.total(), state.site_b.total()};
}

BipartiteFockState concat(const BipartiteFockState& first, const BipartiteFockState& second) {
    auto join = [](const OccupationVector& x, const OccupationVector& y) {
        std::vector<int> v = x.occupations();
        v.insert(v.end(), y.occupations().begin(), y.occupations().end());
        return OccupationVector(std::move(v));
    };
    return {join(first.site_a, second.site_a), join(first.site_b, second.site_b)};
}

std::vector<OccupationVector> occupation_vectors(int photons, int modes) {
    if (photons < 0 || modes < 0) throw InvalidArgument("photons and modes must be non-negative");
    std::vector<OccupationVector> out;
    if (modes == 0) {
        if (photons == 0) out.emplace_back(std::vector<int>{});
        return out;
    }
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    auto rec = [&](auto& self, int mode, int left) -> void {
        if (mode == modes - 1) {
            occ[static_cast<std::size_t>(mode)] = left;
            out.emplace_back(occ);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            occ[static_cast<std::size_t>(mode)] = k;
            self(self, mode + 1, left - k);
        }
    };
    rec(rec, 0, photons);
    return out;
}

// ---------------------------------------------------------------- SparseKet

SparseKet::SparseKet(int modes_a, int modes_b, double drop_threshold)
    : modes_a_(modes_a), modes_b_(modes_b), drop_threshold_(drop_threshold) {
    check_modes(modes_a);
    check_modes(modes_b);
    if (!(drop_threshold >= 0.0)) throw InvalidArgument("drop threshold must be non-negative");
}

SparseKet SparseKet::vacuum(int modes_a, int modes_b) {
    SparseKet k(modes_a, modes_b);
    k.add({OccupationVector::zeros(modes_a), OccupationVector::zeros(modes_b)}, 1.0);
    return k;
}

SparseKet SparseKet::basis(const BipartiteFockState& state) {
    SparseKet k(state.site_a.modes(), state.site_b.modes());
    k.add(state, 1.0);
    return k;
}

void SparseKet::check_shape(const BipartiteFockState& state) const {
    if (state.site_a.modes() != modes_a_ || state.site_b.modes() != modes_b_)
        throw ShapeError("basis state mode counts (" + std::to_string(state.site_a.modes()) + ", " +
                         std::to_string(state.site_b.modes()) + ") do not match ket layout (" +
                         std::to_string(modes_a_) + ", " + std::to_string(modes_b_) + ")");
    int total = state.site_a.total() + state.site_b.total();
    if (total > kMaxPhotons)
        throw CapacityError("at most " + std::to_string(kMaxPhotons) +
                            " photons are supported, got " + std::to_string(total));
}

void SparseKet::add(const BipartiteFockState& state, Complex amplitude) {
    check_shape(state);
    auto it = amplitudes_.find(state);
    if (it == amplitudes_.end()) {
        if (std::abs(amplitude) >= drop_threshold_ && amplitude != Complex(0.0))
            amplitudes_.emplace(state, amplitude);
        return;
    }
    it->second += amplitude;
    if (std::abs(it->second) < drop_threshold_ || it->second == Complex(0.0)) amplitudes_.erase(it);
}

Complex SparseKet::amplitude(const BipartiteFockState& state) const {
    auto it = amplitudes_.find(state);
    return it == amplitudes_.end() ? Complex(0.0) : it->second;
}

double SparseKet::norm2() const {
    double s = 0.0;
    for (const auto& [_, a] : amplitudes_) s += std::norm(a);
    return s;
}

SparseKet SparseKet::normalized() const {
    double n2 = norm2();
    if (!(n2 > 0.0)) throw NormalizationError("cannot normalize a zero ket");
    return scaled(1.0 / std::sqrt(n2));
}

SparseKet SparseKet::scaled(Complex factor) const {
    SparseKet out(modes_a_, modes_b_, drop_threshold_);
    for (const auto& [s, a] : amplitudes_) out.add(s, a * factor);
    return out;
}

int SparseKet::max_photons() const {
    int m = 0;
    for (const auto& [s, _] : amplitudes_) m = std::max(m, s.site_a.total() + s.site_b.total());
    return m;
}

SparseKet operator+(const SparseKet& lhs, const SparseKet& rhs) {
    if (lhs.modes_a() != rhs.modes_a() || lhs.modes_b() != rhs.modes_b())
        throw ShapeError("cannot add kets over different mode layouts");
    SparseKet out = lhs;
    for (const auto& [s, a] : rhs.amplitudes()) out.add(s, a);
    return out;
}

SparseKet tensor(const SparseKet& a, const SparseKet& b) {
    SparseKet out(a.modes_a() + b.modes_a(), a.modes_b() + b.modes_b(),
                  std::min(a.drop_threshold(), b.drop_threshold()));
    for (const auto& [sa, xa] : a.amplitudes())
        for (const auto& [sb, xb] : b.amplitudes()) out.add(concat(sa, sb), xa * xb);
    return out;
}

Complex inner(const SparseKet& a, const SparseKet& b) {
    if (a.modes_a() != b.modes_a() || a.modes_b() != b.modes_b())
        throw ShapeError("inner product of kets over different mode layouts");
    Complex s = 0.0;
    const auto& small = a.size() <= b.size() ? a.amplitudes() : b.amplitudes();
    for (const auto& [st, _] : small) s += std::conj(a.amplitude(st)) * b.amplitude(st);
    return s;
}

// -------------------------------------------------------------- ModeUnitary

ModeUnitary::ModeUnitary(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw ShapeError("mode unitary must be square");
    if (matrix_.rows() == 0) throw InvalidArgument("mode unitary must have dimension >= 1");
    Eigen::MatrixXcd d = matrix_.adjoint() * matrix_ - Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols());
    if (d.cwiseAbs().maxCoeff() >= kUnitarityTolerance)
        throw InvalidArgument("matrix is not unitary within tolerance");
}

ModeUnitary qft_matrix(int d) {
    if (d < 1) throw InvalidArgument("QFT dimension must be >= 1");
    Eigen::MatrixXcd m(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            long long k = (static_cast<long long>(p) * q) % d;
            m(p, q) = std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>(k) / d);
        }
    return ModeUnitary(std::move(m));
}

ModeUnitary random_unitary(int d, std::uint64_t seed, std::uint64_t stream) {
    if (d < 1) throw InvalidArgument("unitary dimension must be >= 1");
    auto eng = stream_engine(seed, stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd z(d, d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
            double re = normal(eng);
            double im = normal(eng);
            z(r, c) = Complex(re, im);
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        Complex rii = r(i, i);
        double mag = std::abs(rii);
        q.col(i) *= mag > 0.0 ? rii / mag : Complex(1.0);
    }
    return ModeUnitary(std::move(q));
}

// ---------------------------------------------------------------- permanent

Complex permanent(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw ShapeError("permanent needs a square matrix");
    const int n = static_cast<int>(m.rows());
    if (n > kMaxPhotons)
        throw CapacityError("permanent dimension " + std::to_string(n) + " exceeds limit " +
                            std::to_string(kMaxPhotons));
    if (n == 0) return 1.0;

    std::vector<Complex> row_sums(static_cast<std::size_t>(n), 0.0);
    Complex total = 0.0;
    std::uint32_t gray = 0;
    int sign = 1;  // (-1)^{|S|}
    const std::uint32_t count = 1u << n;
    for (std::uint32_t k = 1; k < count; ++k) {
        int j = std::countr_zero(k);
        std::uint32_t bit = 1u << j;
        gray ^= bit;
        if (gray & bit) {
            for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] += m(i, j);
        } else {
            for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] -= m(i, j);
        }
        sign = -sign;
        Complex prod = 1.0;
        for (const Complex& v : row_sums) prod *= v;
        total += static_cast<double>(sign) * prod;
    }
    return (n % 2 == 0) ? total : -total;
}

Complex transition_amplitude(const OccupationVector& input, const OccupationVector& output,
                             const ModeUnitary& u) {
    if (input.modes() != u.dimension() || output.modes() != u.dimension())
        throw ShapeError("occupation vectors must cover exactly the unitary's modes");
    const int n = input.total();
    if (n != output.total()) return 0.0;
    if (n > kMaxPhotons)
        throw CapacityError("transition amplitude with " + std::to_string(n) + " photons exceeds limit " +
                            std::to_string(kMaxPhotons));
    std::vector<int> rows, cols;
    for (int q = 0; q < output.modes(); ++q)
        for (int c = 0; c < output[q]; ++c) rows.push_back(q);
    for (int p = 0; p < input.modes(); ++p)
        for (int c = 0; c < input[p]; ++c) cols.push_back(p);
    Eigen::MatrixXcd sub(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sub(i, j) = u(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    double norm = std::exp(-0.5 * (log_factorial_product(input.occupations()) +
                                   log_factorial_product(output.occupations())));
    return permanent(sub) * norm;
}

// ------------------------------------------------------- apply_mode_unitary

namespace {

using Monomials = std::map<std::vector<int>, Complex>;

// Image of the affected-mode occupations `occ` as a polynomial in the output
// creation operators, normalized to Fock amplitudes.
Monomials expand_local(const std::vector<int>& occ, const ModeUnitary& u) {
    const int d = u.dimension();
    Monomials poly{{std::vector<int>(static_cast<std::size_t>(d), 0), Complex(1.0)}};
    for (int k = 0; k < d; ++k) {
        for (int c = 0; c < occ[static_cast<std::size_t>(k)]; ++c) {
            Monomials next;
            for (const auto& [mono, coef] : poly) {
                for (int q = 0; q < d; ++q) {
                    Complex uq = u(q, k);
                    if (uq == Complex(0.0)) continue;
                    std::vector<int> m = mono;
                    ++m[static_cast<std::size_t>(q)];
                    next[m] += coef * uq;
                }
            }
            poly = std::move(next);
        }
    }
    const double in_log = log_factorial_product(occ);
    for (auto& [mono, coef] : poly) coef *= std::exp(0.5 * (log_factorial_product(mono) - in_log));
    return poly;
}

}  // namespace

SparseKet apply_mode_unitary(const SparseKet& state, const ModeUnitary& u, std::span<const ModeRef> modes) {
    const int d = u.dimension();
    if (static_cast<int>(modes.size()) != d)
        throw ShapeError("mode list length " + std::to_string(modes.size()) +
                         " does not match unitary dimension " + std::to_string(d));
    for (std::size_t i = 0; i < modes.size(); ++i) {
        int limit = modes[i].site == Site::a ? state.modes_a() : state.modes_b();
        if (modes[i].index < 0 || modes[i].index >= limit) throw ShapeError("mode index out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (modes[j].site == modes[i].site && modes[j].index == modes[i].index)
                throw ShapeError("mode listed twice");
    }
    if (state.max_photons() > kMaxPhotons) throw CapacityError("photon number exceeds limit");

    SparseKet out(state.modes_a(), state.modes_b(), state.drop_threshold());
    std::map<std::vector<int>, Monomials> cache;
    for (const auto& [basis, amp] : state.amplitudes()) {
        std::vector<int> occ(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            const auto& site = modes[static_cast<std::size_t>(k)].site == Site::a ? basis.site_a : basis.site_b;
            occ[static_cast<std::size_t>(k)] = site[modes[static_cast<std::size_t>(k)].index];
        }
        auto it = cache.find(occ);
        if (it == cache.end()) it = cache.emplace(occ, expand_local(occ, u)).first;
        for (const auto& [mono, coef] : it->second) {
            std::vector<int> a = basis.site_a.occupations();
            std::vector<int> b = basis.site_b.occupations();
            for (int k = 0; k < d; ++k) {
                const ModeRef& r = modes[static_cast<std::size_t>(k)];
                (r.site == Site::a ? a : b)[static_cast<std::size_t>(r.index)] = mono[static_cast<std::size_t>(k)];
            }
            out.add({OccupationVector(std::move(a)), OccupationVector(std::move(b))}, amp * coef);
        }
    }
    return out;
}

}  // namespace ssrt
