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

// Monte Carlo sampling of the teleportation measurement record and
// maximum-likelihood estimation of (|g|, theta).

#ifndef SSRT_ESTIMATION_H
#define SSRT_ESTIMATION_H

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ssrt/ancilla.h"
#include "ssrt/qfi.h"
#include "ssrt/teleport.h"

namespace ssrt {

/// Counts for one measurement setting over M source trials.
struct OutcomeCounts {
    /// (sector n, +1 or -1) for success sectors; (n, 0) for failure sectors.
    std::map<std::pair<int, int>, std::int64_t> counts;
    /// Trials in which no source photon arrived.
    std::int64_t no_detection = 0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    std::int64_t detected() const;
    std::int64_t count(int n, int sign) const;
};

/// Multinomial draw of M trials. Randomness is keyed by (seed, stream), so a
/// repetition can be reproduced on its own. settings[n - 1] applies to sector n.
OutcomeCounts sample_outcomes(const AncillaSpec& spec, const SourceParams& p,
                              std::span<const MeasurementSetting> settings, std::int64_t trials, std::uint64_t seed,
                              std::uint64_t stream = 0);

/// One measurement configuration and its data.
struct SettingData {
    std::vector<MeasurementSetting> settings;
    OutcomeCounts counts;
};

struct FitResult {
    double g_hat = 0.0;
    double theta_hat = 0.0;
    double log_likelihood = 0.0;
    bool wide_interval = false;
};

/// Joint (|g|, theta) fit: 201 x 201 grid over [0, 1] x [0, 2 pi), then
/// Nelder-Mead refinement to 1e-6. The likelihood is conditional on the
/// sector of each detection, so eps drops out.
FitResult mle_fit(const AncillaSpec& spec, std::span<const SettingData> data);
/// theta only, with |g| known: 201-point grid then Brent refinement. When all
/// informative sectors share one phase offset (mod pi), theta is identified only
/// up to a reflection, and the search is restricted to the half period on which
/// theta + phi - delta lies in [-pi, 0].
FitResult mle_fit_theta(const AncillaSpec& spec, std::span<const SettingData> data, double g_known);

/// Expected 2x2 Fisher matrix per trial for one setting; order (|g|, theta).
Eigen::Matrix2d fisher_matrix(const AncillaSpec& spec, const SourceParams& p,
                              std::span<const MeasurementSetting> settings);

enum class EstimationMode { joint, theta_only };

struct MonteCarloConfig {
    std::int64_t trials = 100000;  ///< M per setting
    int repetitions = 200;
    std::uint64_t seed = 1;
    EstimationMode mode = EstimationMode::joint;
};

struct EstimateReport {
    double g_hat = 0.0;      ///< mean over repetitions
    double theta_hat = 0.0;  ///< circular mean over repetitions
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d crb = Eigen::Matrix2d::Zero();
    /// var(theta_hat) / CRB_theta.
    double ratio = 0.0;
    /// var(g_hat) / CRB_|g| (joint mode only).
    double ratio_gmod = 0.0;
    int wide_intervals = 0;
    std::vector<FitResult> fits;
};

/// In-phase and quadrature settings (alpha = pi/2, delta = theta + phi and
/// theta + phi + pi/2) at the true parameters.
std::pair<std::vector<MeasurementSetting>, std::vector<MeasurementSetting>> two_settings(const AncillaSpec& spec,
                                                                                       const SourceParams& p);

/// Repeats sample + fit and compares the spread of the estimates to the CRB.
/// theta_only mode uses just the quadrature setting with |g| known.
EstimateReport run_monte_carlo(const AncillaSpec& spec, const SourceParams& p, const MonteCarloConfig& cfg);

}  // namespace ssrt

#endif  // SSRT_ESTIMATION_H
