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

// Shared ancilla states f_{n,m} and the catalog of named families.

#ifndef SSRT_ANCILLA_H
#define SSRT_ANCILLA_H

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssrt/fock.h"

namespace ssrt {

enum class AncillaKind {
    gjc,
    n_copy_spe,
    klm,
    tri_intensity,
    tri_amplitude,
    optimal_klm,
    tmsv,
    tmsv_with_reference,
    coherent_pair,
    tpe,
    noon,
    custom
};

/// How the unit vector of each (n, m) sector is laid out over physical modes.
///   single_mode_pair:       |n>_A |m>_B on one mode per site.
///   one_photon_per_mode:    K modes per site; A modes 0..n-1 and B modes n..n+m-1 hold one photon each.
///   permuted_superposition: uniform superposition over the ways of choosing which n of the first
///                           n+m mode pairs carry the A photon (the expanded N-copy SPE form).
enum class ModeLayout { single_mode_pair, one_photon_per_mode, permuted_superposition };

inline constexpr int kMaxCatalogPhotons = 4096;
inline constexpr double kTruncationTail = 1e-10;
inline constexpr double kNormalizationTolerance = 1e-10;

std::string to_string(AncillaKind kind);
std::string to_string(ModeLayout layout);
/// Throws InvalidArgument on unknown names.
AncillaKind parse_ancilla_kind(const std::string& name);
ModeLayout parse_mode_layout(const std::string& name);

struct AncillaSpec {
    AncillaKind kind = AncillaKind::custom;
    std::map<SectorLabel, Complex> amplitudes;
    int photon_cap = 0;
    ModeLayout layout = ModeLayout::single_mode_pair;
    /// Per-mode cutoff for truncated infinite families (0 if exact).
    int truncation = 0;
    /// Probability mass discarded by the truncation, before renormalization.
    double tail_weight = 0.0;

    /// Throws NormalizationError unless sum |f|^2 = 1 within 1e-10, and
    /// InvalidArgument if the support exceeds photon_cap.
    void validate() const;
    double norm2() const;
    Complex amplitude(int n, int m) const;
    double weight(int n, int m) const { return std::norm(amplitude(n, m)); }
    /// f_0..f_N when every populated sector has n + m = N.
    std::optional<std::vector<Complex>> diagonal() const;
    double mean_photons() const;
    /// Modes per site used by materialize().
    int modes_per_site() const;
    /// Explicit ket over modes_per_site() modes at each site.
    SparseKet materialize() const;
};

/// Spec with f_n on sectors (n, N - n).
AncillaSpec diagonal_spec(const std::vector<Complex>& f, ModeLayout layout, AncillaKind kind = AncillaKind::custom);

struct BuildParams {
    int photons = 1;         ///< N for the finite families
    double squeezing = 0.0;  ///< r for tmsv kinds
    double alpha = 0.0;      ///< |alpha| for coherent_pair and the tmsv reference
};

/// r with 2 sinh^2 r = mean.
double squeezing_for_mean(double mean_photons);

AncillaSpec build(AncillaKind kind, const BuildParams& params);

/// Closed-form QFI ratio of a family. optimal_klm and odd-N triangles
/// go through the sector sum. Throws UnsupportedError for kinds without a
/// closed form (tmsv_with_reference, custom).
double closed_ratio(AncillaKind kind, const BuildParams& params);

/// 1 - (1 - e^{-2r}) / (2r), with the r -> 0 limit 0.
double coherent_ratio_closed(double r);

struct FisherPair {
    double f_gmod = 0.0;
    double f_theta = 0.0;
};

/// N-copy SPE Fisher information closed forms for N = 1..5; phi = delta - theta.
FisherPair ncopy_fi_closed(int n, double epsilon, double g_mod, double phi);

/// CV-teleportation Fisher information with y = 2 e^{-2r}.
FisherPair cv_fi_closed(double epsilon, double g_mod, double r);

/// Custom-spec JSON: {"kind":"custom","amplitudes":[{"n":..,"m":..,"re":..,"im":..}],"layout":".."}.
AncillaSpec spec_from_json(const std::string& text);
std::string spec_to_json(const AncillaSpec& spec);

}  // namespace ssrt

#endif  // SSRT_ANCILLA_H
