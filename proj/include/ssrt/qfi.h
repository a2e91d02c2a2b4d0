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

// Quantum Fisher information of the weak thermal source, alone and joined
// with a shared ancilla under the local superselection rule.

#ifndef SSRT_QFI_H
#define SSRT_QFI_H

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssrt/ancilla.h"
#include "ssrt/fock.h"

namespace ssrt {

inline constexpr double kFirstOrderEpsilonLimit = 0.05;
inline constexpr double kSldRelativeCutoff = 1e-12;

struct SourceParams {
    double epsilon = 1e-3;
    double g_mod = 0.0;
    double theta = 0.0;

    /// Throws InvalidArgument unless epsilon > 0 and 0 <= g_mod <= 1.
    void validate() const;
    Complex g() const { return std::polar(g_mod, theta); }
};

enum class Parameter { g_mod, theta };
enum class QfiMethod { closed_form, sld_block, finite_epsilon };

std::string to_string(Parameter p);
std::string to_string(QfiMethod m);

struct QfiReport {
    /// Absolute QFI values. h_gmod is empty at |g| = 1.
    std::optional<double> h_gmod;
    std::optional<double> h_theta;
    /// QFI over the optimal QFI, per parameter, where defined.
    std::optional<double> ratio_gmod;
    std::optional<double> ratio_theta;
    /// Smallest defined per-parameter ratio.
    double ratio = 0.0;
    QfiMethod method = QfiMethod::closed_form;
    bool gmod_singular = false;
    bool first_order_warning = false;
};

/// rho^(1) = (1/2)[[1, g], [g*, 1]] on {|0>_A|1>_B, |1>_A|0>_B}.
Eigen::Matrix2cd source_first_order(const SourceParams& p);
Eigen::Matrix2cd source_first_order_derivative(const SourceParams& p, Parameter param);

/// H_|g| = eps / (1 - |g|^2), H_theta = |g|^2 eps.
QfiReport optimal_qfi(const SourceParams& p);
/// Single component; throws SingularityError for |g| at |g| = 1.
double optimal_qfi_value(const SourceParams& p, Parameter param);

/// SLD QFI from rho and its derivative, summing eigenpairs with
/// lambda_i + lambda_j > rel_cutoff * tr(rho).
double sld_qfi(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& drho, double rel_cutoff = kSldRelativeCutoff);

struct FiniteDifference {
    double step = 1e-5;
    bool richardson = true;
};

using DensityFamily = std::function<Eigen::MatrixXcd(double)>;

/// Central difference at mu, optionally Richardson-refined with h and h/2.
Eigen::MatrixXcd central_difference(const DensityFamily& family, double mu, const FiniteDifference& fd = {});
double sld_qfi(const DensityFamily& family, double mu, const FiniteDifference& fd = {},
               double rel_cutoff = kSldRelativeCutoff);

/// Sector-sum formula h = sum 2|f_{n,m-1}|^2 |f_{n-1,m}|^2 / (|f_{n,m-1}|^2 + |f_{n-1,m}|^2).
double qfi_ratio_closed(const AncillaSpec& spec);

enum class DerivativeMode { analytic, finite_difference };

struct EndToEndOptions {
    DerivativeMode derivative = DerivativeMode::analytic;
    FiniteDifference fd;
    /// Also carry the (1 - eps) source-vacuum term through the twirl. Its
    /// blocks are parameter-free and have disjoint support, so the result
    /// does not change.
    bool include_vacuum = false;
};

/// Builds source (x) ancilla to first order in eps, applies the local twirl,
/// and sums per-block SLD QFIs.
QfiReport qfi_ratio_end_to_end(const AncillaSpec& spec, const SourceParams& p, const EndToEndOptions& opt = {});
/// Same, for an explicit ancilla ket.
QfiReport qfi_ratio_end_to_end(const SparseKet& ancilla, const SourceParams& p, const EndToEndOptions& opt = {});

enum class RotationKind { identity, sector_haar, passive_optics };

/// Re-expresses the ancilla's internal mode configuration: sector_haar replaces
/// each sector component by a Haar-random unit vector of the same sector;
/// passive_optics applies Haar-random local mode unitaries at A and at B.
SparseKet rotate_ancilla(const AncillaSpec& spec, RotationKind kind, std::uint64_t seed);

struct InvarianceReport {
    double baseline = 0.0;
    std::vector<double> ratios;
    double max_deviation = 0.0;
    bool consistent = true;
};

/// Even seeds use sector_haar, odd seeds passive_optics.
InvarianceReport invariance_check(const AncillaSpec& spec, std::span<const std::uint64_t> seeds,
                                  const SourceParams& p = {1e-3, 0.5, 0.7}, double tolerance = 1e-8);

}  // namespace ssrt

#endif  // SSRT_QFI_H
