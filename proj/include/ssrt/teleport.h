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

// Linear-optical teleportation of the source photon through a diagonal
// ancilla sum_n f_n |1^n 0^{N-n}>_A |0^n 1^{N-n}>_B.
//
// Mode layout: A has a_0 (source) and a_1..a_N (ancilla); B likewise. The
// f_n term occupies A modes 1..n and B modes n+1..N. A quantum Fourier
// transform acts on a_0..a_N, every port is counted, and the relative phase
// of the two surviving B configurations is corrected on mode b_n.
//
// Conditional states use the basis {b_0 occupied, b_n occupied}.

#ifndef SSRT_TELEPORT_H
#define SSRT_TELEPORT_H

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ssrt/ancilla.h"
#include "ssrt/fock.h"
#include "ssrt/qfi.h"

namespace ssrt {

inline constexpr int kMaxTeleportPhotons = 7;

/// Photon counts on the N + 1 output ports at A.
struct Arrangement {
    OccupationVector counts;
    int detected_total() const { return counts.total(); }
};

/// Port of each detected photon, nondecreasing.
struct DetectionList {
    std::vector<int> ports;
};

DetectionList detection_list(const Arrangement& s);

/// Weak compositions of n into `ports` parts, lexicographic.
std::vector<Arrangement> arrangements(int n, int ports);

/// 2 pi (sum d_i) / (N + 1), reduced to [0, 2 pi).
double phase_correction(const DetectionList& d, int big_n);

struct ConditionalState {
    int sector = 0;
    /// p_n: (|f_n|^2 + |f_{n-1}|^2)/2, or the single surviving term over 2 at n = 0, N + 1.
    double weight = 0.0;
    Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Zero();
    /// n = 0 or N + 1: only one term survives and the state carries no g.
    bool failure = false;
    Complex f_n = 0.0;
    Complex f_prev = 0.0;
};

/// Predicted B state for sector n in 0..N+1 (f = f_0..f_N).
ConditionalState conditional_state(const std::vector<Complex>& f, const SourceParams& p, int n);
ConditionalState conditional_state(const AncillaSpec& spec, const SourceParams& p, int n);

/// Result of one detection pattern.
struct BranchRecord {
    Arrangement arrangement;
    DetectionList detections;
    int sector = 0;
    /// Permanent-based amplitudes of the b_0 term (c0) and the a_0 term (c1),
    /// without the ancilla amplitudes. Zero when the term cannot reach this sector.
    Complex c0 = 0.0;
    Complex c1 = 0.0;
    /// The same amplitudes read off the creation-operator expansion.
    std::optional<Complex> c0_expansion;
    std::optional<Complex> c1_expansion;
    double phase = 0.0;
    /// Unnormalized phase-corrected B state given the source photon: weight
    /// eps * rho^(1) folded in, so summing branches of a sector gives eps * p_n * rho_n^B.
    Eigen::Matrix2cd b_state = Eigen::Matrix2cd::Zero();
};

struct PipelineOptions {
    /// Recompute every amplitude from the explicit creation-operator expansion.
    bool expansion_cross_check = true;
};

struct PipelineResult {
    int photons = 0;  ///< N
    std::vector<BranchRecord> branches;
    /// Sector n = 0..N+1 rebuilt from the branches.
    std::vector<ConditionalState> sectors;
    /// Per sector, the operators G^{ij} with sum_{ij} rho_ij G^{ij} = unnormalized B state
    /// for a unit-weight source rho over {|0>_A|1>_B, |1>_A|0>_B}; index 2 i + j.
    std::vector<std::array<Eigen::Matrix2cd, 4>> gram;
    /// max |c0 - c1 omega^{sum d}| over branches where both terms reach the sector.
    double max_identity_error = 0.0;
    /// max |permanent amplitude - expansion amplitude|.
    double max_expansion_error = 0.0;
    /// max deviation of the rebuilt sector states from conditional_state.
    double max_reconstruction_error = 0.0;
};

PipelineResult simulate_pipeline(const AncillaSpec& spec, const SourceParams& p, const PipelineOptions& opt = {});

struct MeasurementSetting {
    double alpha = 0.0;
    double delta = 0.0;
};

/// |+> = cos(a/2)|b_0> + sin(a/2) e^{-i delta} |b_n>, |-> orthogonal.
std::pair<Eigen::Vector2cd, Eigen::Vector2cd> measurement_kets(const MeasurementSetting& ms);

/// (P_+, P_-) including the eps * p_n weight; closed formula for success
/// sectors, projector evaluation for failure sectors.
std::pair<double, double> measurement_probs(const ConditionalState& cs, const MeasurementSetting& ms,
                                            const SourceParams& p);
/// eps * p_n * <+-| rho_n^B |+->.
std::pair<double, double> measurement_probs_projector(const ConditionalState& cs, const MeasurementSetting& ms,
                                                      const SourceParams& p);

/// P_+- = (eps p_n / 2)(1 +- x) for a success sector, with x and its
/// parameter derivatives at fixed setting.
struct SectorResponse {
    double x = 0.0;
    double dx_gmod = 0.0;
    double dx_theta = 0.0;
};
SectorResponse sector_response(const ConditionalState& cs, const MeasurementSetting& ms, const SourceParams& p);

MeasurementSetting optimal_settings(Parameter param, const ConditionalState& cs, const SourceParams& p);
/// Settings for sectors 1..N (index n - 1).
std::vector<MeasurementSetting> optimal_settings(Parameter param, const AncillaSpec& spec, const SourceParams& p);

struct FisherReport {
    double f_gmod = 0.0;
    double f_theta = 0.0;
    std::optional<double> ratio_gmod;
    std::optional<double> ratio_theta;
};

/// Classical FI of the +- outcomes per sector; settings[n - 1] is used in sector n.
FisherReport fisher_information(const AncillaSpec& spec, const SourceParams& p,
                                std::span<const MeasurementSetting> settings);
/// F_|g| at the |g|-optimal settings and F_theta at the theta-optimal settings.
FisherReport fisher_information(const AncillaSpec& spec, const SourceParams& p);

/// The same FI computed from the simulated per-sector operators instead of
/// the closed formula.
FisherReport fisher_information_pipeline(const PipelineResult& pipe, const SourceParams& p,
                                          std::span<const MeasurementSetting> settings_gmod,
                                          std::span<const MeasurementSetting> settings_theta);

/// Probability that the teleportation fails (sectors 0 and N + 1).
double failure_probability(const AncillaSpec& spec);

}  // namespace ssrt

#endif  // SSRT_TELEPORT_H
