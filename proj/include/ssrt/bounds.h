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

// Upper bounds on the QFI ratio and the optimizer over diagonal ancillas.

#ifndef SSRT_BOUNDS_H
#define SSRT_BOUNDS_H

#include <cstdint>
#include <string>
#include <vector>

namespace ssrt {

/// Weights x_0..x_k on the probability simplex.
struct Distribution {
    std::vector<double> weights;
    /// Throws InvalidArgument on negative entries or a sum off 1 by more than 1e-12.
    void validate() const;
    int k() const { return static_cast<int>(weights.size()) - 1; }
};

/// cos(pi / (N + 2)).
double bound_max_photons(int n);
/// cos(pi / (mean + 2)).
double bound_mean_photons(double mean_n);
/// (pi / 4) * mean, the small-mean reduction of the mean-photon bound.
double small_photon_bound(double mean_n);
/// 1 - pi^2 / k^2.
double asymptotic_bound(int k);

struct EigenPair {
    double eigenvalue = 0.0;
    Distribution vector;  ///< squared, normalized eigenvector
};

/// Largest eigenpair of the (k+1)x(k+1) tridiagonal matrix with unit
/// off-diagonals: 2 cos(pi/(k+2)), x_i = (2/(k+1)) sin^2((i+1) pi/(k+2)).
EigenPair tridiag_max_eig(int k);

/// sum_{i=1}^k sqrt(x_i x_{i-1}).
double sqrt_product_sum(const std::vector<double>& x);
/// S_k(x) = sum_{i=1}^k 2 x_i x_{i-1} / (x_i + x_{i-1}), zero-denominator terms 0.
double harmonic_sum(const std::vector<double>& x);
std::vector<double> harmonic_sum_gradient(const std::vector<double>& x);

struct MaxResult {
    double value = 0.0;
    Distribution argmax;
    bool warning = false;  ///< set when no restart met the stationarity tolerance
    double stationarity = 0.0;
    int iterations = 0;
};

/// max sum sqrt(x_i x_{i-1}) = cos(pi/(k+2)) at the Chebyshev distribution.
MaxResult maximize_sqrt_product(int k);

enum class StepRule { exponentiated_gradient, projected_gradient };

std::string to_string(StepRule r);
StepRule parse_step_rule(const std::string& name);

struct OptimizerConfig {
    int restarts = 20;
    int max_iters = 20000;
    StepRule step_rule = StepRule::exponentiated_gradient;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    void validate() const;
};

/// Projected gradient norm of S_k at x (gradient minus its weighted mean,
/// restricted to the simplex tangent space).
double simplex_stationarity(const std::vector<double>& x);

/// Multi-start ascent of S_k over the simplex.
MaxResult maximize_h_simplex(int k, const OptimizerConfig& cfg = {});

}  // namespace ssrt

#endif  // SSRT_BOUNDS_H
