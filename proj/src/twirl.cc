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

#include "ssrt/twirl.h"

#include <algorithm>
#include <set>

#include "ssrt/error.h"

namespace ssrt {

Density::Density(int modes_a, int modes_b, std::vector<BipartiteFockState> basis, Eigen::MatrixXcd matrix)
    : modes_a_(modes_a), modes_b_(modes_b), basis_(std::move(basis)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(basis_.size());
    if (matrix_.rows() != n || matrix_.cols() != n) throw ShapeError("density matrix does not match its basis");
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (basis_[i].site_a.modes() != modes_a_ || basis_[i].site_b.modes() != modes_b_)
            throw ShapeError("basis state has the wrong mode counts");
        if (i > 0 && !(basis_[i - 1] < basis_[i])) throw ShapeError("density basis must be strictly sorted");
    }
}

std::optional<int> Density::index_of(const BipartiteFockState& state) const {
    auto it = std::lower_bound(basis_.begin(), basis_.end(), state);
    if (it == basis_.end() || !(*it == state)) return std::nullopt;
    return static_cast<int>(it - basis_.begin());
}

Density Density::from_ket(const SparseKet& ket) { return from_mixture({{1.0, ket}}); }

Density Density::from_mixture(const std::vector<std::pair<double, SparseKet>>& terms) {
    if (terms.empty()) throw InvalidArgument("empty mixture");
    const int ma = terms.front().second.modes_a();
    const int mb = terms.front().second.modes_b();
    std::set<BipartiteFockState> support;
    for (const auto& [w, k] : terms) {
        if (k.modes_a() != ma || k.modes_b() != mb) throw ShapeError("mixture kets use different layouts");
        if (w < 0.0) throw InvalidArgument("negative mixture weight");
        for (const auto& [s, _] : k.amplitudes()) support.insert(s);
    }
    std::vector<BipartiteFockState> basis(support.begin(), support.end());
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [w, k] : terms) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = k.amplitude(basis[static_cast<std::size_t>(i)]);
        m += w * v * v.adjoint();
    }
    return Density(ma, mb, std::move(basis), std::move(m));
}

Density kron(const Density& a, const Density& b) {
    std::vector<std::pair<BipartiteFockState, std::pair<int, int>>> rows;
    rows.reserve(static_cast<std::size_t>(a.dimension() * b.dimension()));
    for (int i = 0; i < a.dimension(); ++i)
        for (int j = 0; j < b.dimension(); ++j)
            rows.push_back({concat(a.basis()[static_cast<std::size_t>(i)], b.basis()[static_cast<std::size_t>(j)]),
                            {i, j}});
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto& [ri, rj] = rows[static_cast<std::size_t>(r)].second;
            const auto& [ci, cj] = rows[static_cast<std::size_t>(c)].second;
            m(r, c) = a.matrix()(ri, ci) * b.matrix()(rj, cj);
        }
    std::vector<BipartiteFockState> basis;
    basis.reserve(rows.size());
    for (auto& r : rows) basis.push_back(std::move(r.first));
    return Density(a.modes_a() + b.modes_a(), a.modes_b() + b.modes_b(), std::move(basis), std::move(m));
}

double BlockDensity::trace() const {
    double t = 0.0;
    for (const auto& b : blocks) t += b.trace();
    return t;
}

const DensityBlock* BlockDensity::find(SectorLabel label) const {
    for (const auto& b : blocks)
        if (b.label == label) return &b;
    return nullptr;
}

SectorLabel sector_of(const BipartiteFockState& state, SectorKind kind) {
    SectorLabel l = local_photon_numbers(state);
    if (kind == SectorKind::global) return {l.n_a + l.n_b, 0};
    return l;
}

std::map<SectorLabel, std::vector<int>> partition_sectors(const std::vector<BipartiteFockState>& basis,
                                                          SectorKind kind) {
    std::map<SectorLabel, std::vector<int>> out;
    for (std::size_t i = 0; i < basis.size(); ++i) out[sector_of(basis[i], kind)].push_back(static_cast<int>(i));
    return out;
}

BlockDensity project_sectors(const Density& rho, SectorKind kind, double min_trace) {
    BlockDensity bd;
    bd.kind = kind;
    bd.modes_a = rho.modes_a();
    bd.modes_b = rho.modes_b();
    for (const auto& [label, idx] : partition_sectors(rho.basis(), kind)) {
        const auto n = static_cast<Eigen::Index>(idx.size());
        DensityBlock b;
        b.label = label;
        b.matrix.resize(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            b.basis.push_back(rho.basis()[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])]);
            for (Eigen::Index c = 0; c < n; ++c)
                b.matrix(r, c) = rho.matrix()(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
        }
        if (min_trace >= 0.0 && b.trace() < min_trace) continue;
        bd.blocks.push_back(std::move(b));
    }
    return bd;
}

BlockDensity twirl_local(const SparseKet& ket) { return twirl_local(Density::from_ket(ket)); }
BlockDensity twirl_local(const Density& rho) { return project_sectors(rho, SectorKind::local); }
BlockDensity twirl_local(const BlockDensity& bd) { return twirl_local(to_density(bd)); }
BlockDensity twirl_global(const SparseKet& ket) { return twirl_global(Density::from_ket(ket)); }
BlockDensity twirl_global(const Density& rho) { return project_sectors(rho, SectorKind::global); }
BlockDensity twirl_global(const BlockDensity& bd) { return twirl_global(to_density(bd)); }

Density to_density(const BlockDensity& bd) {
    std::vector<std::pair<BipartiteFockState, std::pair<std::size_t, Eigen::Index>>> entries;
    for (std::size_t k = 0; k < bd.blocks.size(); ++k)
        for (std::size_t i = 0; i < bd.blocks[k].basis.size(); ++i)
            entries.push_back({bd.blocks[k].basis[i], {k, static_cast<Eigen::Index>(i)}});
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    const auto n = static_cast<Eigen::Index>(entries.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto& [kr, ir] = entries[static_cast<std::size_t>(r)].second;
            const auto& [kc, ic] = entries[static_cast<std::size_t>(c)].second;
            if (kr == kc) m(r, c) = bd.blocks[kr].matrix(ir, ic);
        }
    std::vector<BipartiteFockState> basis;
    for (auto& e : entries) basis.push_back(std::move(e.first));
    return Density(bd.modes_a, bd.modes_b, std::move(basis), std::move(m));
}

BlockDensity sector_filter(const BlockDensity& bd, const std::function<bool(SectorLabel)>& keep) {
    BlockDensity out;
    out.kind = bd.kind;
    out.modes_a = bd.modes_a;
    out.modes_b = bd.modes_b;
    for (const auto& b : bd.blocks)
        if (keep(b.label)) out.blocks.push_back(b);
    return out;
}

}  // namespace ssrt
