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

// Photon-number superselection maps. A twirl keeps the blocks of a density
// operator that are diagonal in local (n_A, n_B) sectors, or in the total
// photon number for the global map.

#ifndef SSRT_TWIRL_H
#define SSRT_TWIRL_H

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ssrt/fock.h"

namespace ssrt {

inline constexpr double kBlockDropTrace = 1e-13;

/// Dense operator over an explicit, sorted list of basis states.
class Density {
   public:
    Density(int modes_a, int modes_b, std::vector<BipartiteFockState> basis, Eigen::MatrixXcd matrix);

    static Density from_ket(const SparseKet& ket);
    /// sum_k w_k |psi_k><psi_k| over the union of the kets' supports.
    static Density from_mixture(const std::vector<std::pair<double, SparseKet>>& terms);

    int modes_a() const { return modes_a_; }
    int modes_b() const { return modes_b_; }
    const std::vector<BipartiteFockState>& basis() const { return basis_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    int dimension() const { return static_cast<int>(basis_.size()); }
    Complex trace() const { return matrix_.trace(); }
    /// Index of `state` in the basis, if present.
    std::optional<int> index_of(const BipartiteFockState& state) const;

   private:
    int modes_a_;
    int modes_b_;
    std::vector<BipartiteFockState> basis_;
    Eigen::MatrixXcd matrix_;
};

/// a (x) b with a's modes first at each site.
Density kron(const Density& a, const Density& b);

enum class SectorKind { local, global };

/// Block of a twirled operator. Global blocks carry label (n_total, 0).
struct DensityBlock {
    SectorLabel label;
    std::vector<BipartiteFockState> basis;
    Eigen::MatrixXcd matrix;
    double trace() const { return matrix.trace().real(); }
};

struct BlockDensity {
    SectorKind kind = SectorKind::local;
    int modes_a = 0;
    int modes_b = 0;
    std::vector<DensityBlock> blocks;  // ordered by label

    double trace() const;
    const DensityBlock* find(SectorLabel label) const;
};

SectorLabel sector_of(const BipartiteFockState& state, SectorKind kind);

/// Groups basis indices by sector, in label order.
std::map<SectorLabel, std::vector<int>> partition_sectors(const std::vector<BipartiteFockState>& basis,
                                                          SectorKind kind);

/// Sector blocks of an arbitrary operator. Blocks with trace below
/// `min_trace` are dropped; pass a negative value to keep every sector.
BlockDensity project_sectors(const Density& rho, SectorKind kind, double min_trace = kBlockDropTrace);

BlockDensity twirl_local(const SparseKet& ket);
BlockDensity twirl_local(const Density& rho);
BlockDensity twirl_local(const BlockDensity& bd);
BlockDensity twirl_global(const SparseKet& ket);
BlockDensity twirl_global(const Density& rho);
BlockDensity twirl_global(const BlockDensity& bd);

/// Reassembles the block-diagonal operator.
Density to_density(const BlockDensity& bd);

BlockDensity sector_filter(const BlockDensity& bd, const std::function<bool(SectorLabel)>& keep);

}  // namespace ssrt

#endif  // SSRT_TWIRL_H
