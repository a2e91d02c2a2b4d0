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

// Exact multimode bosonic Fock states split across two sites, plus the
// linear-optical mode transformations acting on them.
//
// Mode transformation convention: a unitary U sends a_p^dagger to
// sum_q U(q, p) a_q^dagger, so a single photon in mode p ends up with
// amplitude U(q, p) in mode q.

#ifndef SSRT_FOCK_H
#define SSRT_FOCK_H

#include <Eigen/Dense>
#include <bit>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace ssrt {

using Complex = std::complex<double>;

inline constexpr int kMaxPhotons = 12;
inline constexpr int kMaxModesPerSite = 12;
inline constexpr double kAmplitudeDropThreshold = 1e-14;
inline constexpr double kUnitarityTolerance = 1e-12;

/// Photons per mode for one site.
class OccupationVector {
   public:
    OccupationVector() = default;
    explicit OccupationVector(std::vector<int> occupations);
    /// All-empty vector over `modes` modes.
    static OccupationVector zeros(int modes);

    int modes() const { return static_cast<int>(occupations_.size()); }
    int total() const;
    int operator[](int mode) const { return occupations_[static_cast<std::size_t>(mode)]; }
    const std::vector<int>& occupations() const { return occupations_; }

    auto operator<=>(const OccupationVector&) const = default;
    bool operator==(const OccupationVector&) const = default;

   private:
    std::vector<int> occupations_;
};

/// Local photon numbers (n_A, n_B) of a bipartite basis state, or the
/// (n_A, n_B) label of a superselection sector.
struct SectorLabel {
    int n_a = 0;
    int n_b = 0;
    auto operator<=>(const SectorLabel&) const = default;
};

/// Basis atom: an occupation vector at each site. Ordered lexicographically on
/// (site A, site B).
struct BipartiteFockState {
    OccupationVector site_a;
    OccupationVector site_b;
    auto operator<=>(const BipartiteFockState&) const = default;
    bool operator==(const BipartiteFockState&) const = default;
};

SectorLabel local_photon_numbers(const BipartiteFockState& state);

/// Sparse pure state over a fixed (modes_a, modes_b) layout. Amplitudes whose
/// magnitude falls below the drop threshold are never stored.
class SparseKet {
   public:
    SparseKet(int modes_a, int modes_b, double drop_threshold = kAmplitudeDropThreshold);

    static SparseKet vacuum(int modes_a, int modes_b);
    static SparseKet basis(const BipartiteFockState& state);

    int modes_a() const { return modes_a_; }
    int modes_b() const { return modes_b_; }
    double drop_threshold() const { return drop_threshold_; }

    /// Accumulates `amplitude` onto `state`; the entry is erased if the sum
    /// drops below threshold.
    void add(const BipartiteFockState& state, Complex amplitude);
    Complex amplitude(const BipartiteFockState& state) const;
    const std::map<BipartiteFockState, Complex>& amplitudes() const { return amplitudes_; }
    std::size_t size() const { return amplitudes_.size(); }
    bool empty() const { return amplitudes_.empty(); }

    double norm2() const;
    SparseKet normalized() const;
    SparseKet scaled(Complex factor) const;
    /// Largest local photon total present (max over n_A + n_B).
    int max_photons() const;

   private:
    void check_shape(const BipartiteFockState& state) const;

    int modes_a_;
    int modes_b_;
    double drop_threshold_;
    std::map<BipartiteFockState, Complex> amplitudes_;
};

SparseKet operator+(const SparseKet& lhs, const SparseKet& rhs);

/// Square unitary over a declared set of modes.
class ModeUnitary {
   public:
    explicit ModeUnitary(Eigen::MatrixXcd matrix);
    int dimension() const { return static_cast<int>(matrix_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    Complex operator()(int row, int col) const { return matrix_(row, col); }

   private:
    Eigen::MatrixXcd matrix_;
};

/// Discrete Fourier transform on d modes: entry (p, q) = exp(2 pi i p q / d) / sqrt(d).
ModeUnitary qft_matrix(int d);

/// Haar-random unitary (complex Ginibre + QR with phase fix), deterministic in
/// (seed, stream).
ModeUnitary random_unitary(int d, std::uint64_t seed, std::uint64_t stream = 0);

/// Matrix permanent by Ryser's formula with Gray-code updates, O(2^n n).
Complex permanent(const Eigen::MatrixXcd& m);

/// <output| U |input> for single-site occupation vectors. Returns exactly 0 when
/// photon numbers differ.
Complex transition_amplitude(const OccupationVector& input, const OccupationVector& output,
                             const ModeUnitary& u);

enum class Site { a, b };

struct ModeRef {
    Site site;
    int index;
};

/// Applies `u` to the listed modes (row/column k of `u` acts on modes[k]) by
/// expanding every creation operator. Other modes are untouched.
SparseKet apply_mode_unitary(const SparseKet& state, const ModeUnitary& u,
                             std::span<const ModeRef> modes);

/// Joint state with `a`'s modes first at each site.
SparseKet tensor(const SparseKet& a, const SparseKet& b);

/// <a|b>, conjugate-linear in `a`.
Complex inner(const SparseKet& a, const SparseKet& b);

/// Every occupation vector of `photons` photons over `modes` modes, in
/// ascending lexicographic order.
std::vector<OccupationVector> occupation_vectors(int photons, int modes);

/// Concatenates site occupations, `first` before `second` at each site.
BipartiteFockState concat(const BipartiteFockState& first, const BipartiteFockState& second);

}  // namespace ssrt

#endif  // SSRT_FOCK_H
