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

#include "ssrt/qfi.h"

#include <cmath>
#include <random>

#include "ssrt/error.h"
#include "ssrt/rng.h"
#include "ssrt/twirl.h"

namespace ssrt {

void SourceParams::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be positive");
    if (!(g_mod >= 0.0 && g_mod <= 1.0)) throw InvalidArgument("|g| must lie in [0, 1]");
    if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
}

std::string to_string(Parameter p) { return p == Parameter::g_mod ? "g_mod" : "theta"; }

std::string to_string(QfiMethod m) {
    switch (m) {
        case QfiMethod::closed_form:
            return "closed_form";
        case QfiMethod::sld_block:
            return "sld_block";
        case QfiMethod::finite_epsilon:
            return "finite_epsilon";
    }
    return "closed_form";
}

Eigen::Matrix2cd source_first_order(const SourceParams& p) {
    p.validate();
    const Complex g = p.g();
    Eigen::Matrix2cd m;
    m << 0.5, 0.5 * g, 0.5 * std::conj(g), 0.5;
    return m;
}

Eigen::Matrix2cd source_first_order_derivative(const SourceParams& p, Parameter param) {
    p.validate();
    const Complex dg = param == Parameter::g_mod ? std::polar(1.0, p.theta) : Complex(0.0, 1.0) * p.g();
    Eigen::Matrix2cd m;
    m << 0.0, 0.5 * dg, 0.5 * std::conj(dg), 0.0;
    return m;
}

QfiReport optimal_qfi(const SourceParams& p) {
    p.validate();
    QfiReport r;
    r.method = QfiMethod::closed_form;
    r.h_theta = p.g_mod * p.g_mod * p.epsilon;
    if (p.g_mod < 1.0) {
        r.h_gmod = p.epsilon / (1.0 - p.g_mod * p.g_mod);
        r.ratio_gmod = 1.0;
    } else {
        r.gmod_singular = true;
    }
    if (p.g_mod > 0.0) r.ratio_theta = 1.0;
    r.ratio = 1.0;
    r.first_order_warning = p.epsilon > kFirstOrderEpsilonLimit;
    return r;
}

double optimal_qfi_value(const SourceParams& p, Parameter param) {
    p.validate();
    if (param == Parameter::theta) return p.g_mod * p.g_mod * p.epsilon;
    if (p.g_mod >= 1.0) throw SingularityError("H_|g| diverges at |g| = 1");
    return p.epsilon / (1.0 - p.g_mod * p.g_mod);
}

double sld_qfi(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& drho, double rel_cutoff) {
    if (rho.rows() != rho.cols() || drho.rows() != drho.cols() || rho.rows() != drho.rows())
        throw ShapeError("rho and its derivative must be square and of equal size");
    if (rho.rows() == 0) return 0.0;
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw ShapeError("rho is not Hermitian");
    const double dscale = std::max(1e-300, drho.cwiseAbs().maxCoeff());
    if ((drho - drho.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * dscale)
        throw ShapeError("rho derivative is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXcd& v = es.eigenvectors();
    const double tol = rel_cutoff * std::abs(rho.trace().real());
    const Eigen::MatrixXcd d = v.adjoint() * drho * v;
    double h = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        for (Eigen::Index j = 0; j < lam.size(); ++j) {
            const double s = lam(i) + lam(j);
            if (s > tol) h += 2.0 * std::norm(d(i, j)) / s;
        }
    return h;
}

Eigen::MatrixXcd central_difference(const DensityFamily& family, double mu, const FiniteDifference& fd) {
    if (!(fd.step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    auto diff = [&](double h) { return Eigen::MatrixXcd((family(mu + h) - family(mu - h)) / (2.0 * h)); };
    if (!fd.richardson) return diff(fd.step);
    return (4.0 * diff(fd.step / 2.0) - diff(fd.step)) / 3.0;
}

double sld_qfi(const DensityFamily& family, double mu, const FiniteDifference& fd, double rel_cutoff) {
    return sld_qfi(family(mu), central_difference(family, mu, fd), rel_cutoff);
}

double qfi_ratio_closed(const AncillaSpec& spec) {
    spec.validate();
    double h = 0.0;
    for (const auto& [l, _] : spec.amplitudes) {
        // Each populated (n, m-1) sector pairs with (n-1, m) in block (n, m).
        const int n = l.n_a;
        const int m = l.n_b + 1;
        if (n < 1) continue;
        const double a = spec.weight(n, m - 1);
        const double b = spec.weight(n - 1, m);
        if (a + b > 0.0) h += 2.0 * a * b / (a + b);
    }
    return h;
}

// ----------------------------------------------------------- end to end

namespace {

// Source over one mode per site. With vacuum, basis is {|00>, |0>|1>, |1>|0>}.
// Derivatives pass derivative = true so the constant vacuum entry is zero.
Density source_density(const Eigen::Matrix2cd& first_order, double epsilon, bool vacuum, bool derivative = false) {
    std::vector<BipartiteFockState> basis;
    if (vacuum) basis.push_back({OccupationVector({0}), OccupationVector({0})});
    basis.push_back({OccupationVector({0}), OccupationVector({1})});
    basis.push_back({OccupationVector({1}), OccupationVector({0})});
    const int off = vacuum ? 1 : 0;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 + off, 2 + off);
    if (vacuum && !derivative) m(0, 0) = 1.0 - epsilon;
    m.block(off, off, 2, 2) = epsilon * first_order;
    return Density(1, 1, std::move(basis), std::move(m));
}

Eigen::MatrixXcd sub_block(const Eigen::MatrixXcd& m, const std::vector<int>& idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd out(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) out(r, c) = m(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    return out;
}

double joint_qfi(const Density& ancilla, const SourceParams& p, Parameter param, const EndToEndOptions& opt) {
    const Density rho = kron(source_density(source_first_order(p), p.epsilon, opt.include_vacuum), ancilla);
    const auto sectors = partition_sectors(rho.basis(), SectorKind::local);
    const double total = std::abs(rho.trace().real());
    double h = 0.0;
    if (opt.derivative == DerivativeMode::analytic) {
        const Density drho =
            kron(source_density(source_first_order_derivative(p, param), p.epsilon, opt.include_vacuum, true), ancilla);
        for (const auto& [label, idx] : sectors) {
            Eigen::MatrixXcd block = sub_block(rho.matrix(), idx);
            if (block.trace().real() < kBlockDropTrace) continue;
            h += sld_qfi(block, sub_block(drho.matrix(), idx), kSldRelativeCutoff * total / block.trace().real());
        }
        return h;
    }
    const double mu = param == Parameter::g_mod ? p.g_mod : p.theta;
    DensityFamily family = [&](double x) {
        SourceParams q = p;
        if (param == Parameter::g_mod) {
            // rho is affine in |g|, so stepping past [0, 1] is harmless for the difference.
            q.g_mod = std::clamp(x, 0.0, 1.0);
            Eigen::Matrix2cd s = source_first_order(q);
            const Complex g = std::polar(x, p.theta);
            s(0, 1) = 0.5 * g;
            s(1, 0) = 0.5 * std::conj(g);
            return Eigen::MatrixXcd(kron(source_density(s, p.epsilon, opt.include_vacuum), ancilla).matrix());
        }
        q.theta = x;
        return Eigen::MatrixXcd(kron(source_density(source_first_order(q), p.epsilon, opt.include_vacuum), ancilla).matrix());
    };
    const Eigen::MatrixXcd drho = central_difference(family, mu, opt.fd);
    for (const auto& [label, idx] : sectors) {
        Eigen::MatrixXcd block = sub_block(rho.matrix(), idx);
        if (block.trace().real() < kBlockDropTrace) continue;
        h += sld_qfi(block, sub_block(drho, idx), kSldRelativeCutoff * total / block.trace().real());
    }
    return h;
}

}  // namespace

QfiReport qfi_ratio_end_to_end(const SparseKet& ancilla, const SourceParams& p, const EndToEndOptions& opt) {
    p.validate();
    if (ancilla.max_photons() + 1 > kMaxPhotons)
        throw CapacityError("ancilla plus source photon exceeds " + std::to_string(kMaxPhotons) + " photons");
    const Density a = Density::from_ket(ancilla.normalized());
    QfiReport r;
    r.method = opt.derivative == DerivativeMode::analytic ? QfiMethod::sld_block : QfiMethod::finite_epsilon;
    r.first_order_warning = p.epsilon > kFirstOrderEpsilonLimit;
    r.h_theta = joint_qfi(a, p, Parameter::theta, opt);
    if (p.g_mod < 1.0) {
        r.h_gmod = joint_qfi(a, p, Parameter::g_mod, opt);
        r.ratio_gmod = *r.h_gmod / optimal_qfi_value(p, Parameter::g_mod);
    } else {
        r.gmod_singular = true;
    }
    if (p.g_mod > 0.0) r.ratio_theta = *r.h_theta / optimal_qfi_value(p, Parameter::theta);
    if (r.ratio_gmod && r.ratio_theta)
        r.ratio = std::min(*r.ratio_gmod, *r.ratio_theta);
    else
        r.ratio = r.ratio_gmod ? *r.ratio_gmod : *r.ratio_theta;
    return r;
}

QfiReport qfi_ratio_end_to_end(const AncillaSpec& spec, const SourceParams& p, const EndToEndOptions& opt) {
    spec.validate();
    return qfi_ratio_end_to_end(spec.materialize(), p, opt);
}

// ------------------------------------------------------------- invariance

SparseKet rotate_ancilla(const AncillaSpec& spec, RotationKind kind, std::uint64_t seed) {
    spec.validate();
    SparseKet base = spec.materialize();
    const int k = base.modes_a();
    switch (kind) {
        case RotationKind::identity:
            return base;
        case RotationKind::passive_optics: {
            std::vector<ModeRef> a_modes, b_modes;
            for (int i = 0; i < k; ++i) {
                a_modes.push_back({Site::a, i});
                b_modes.push_back({Site::b, i});
            }
            SparseKet out = apply_mode_unitary(base, random_unitary(k, seed, 1), a_modes);
            return apply_mode_unitary(out, random_unitary(k, seed, 2), b_modes);
        }
        case RotationKind::sector_haar: {
            SparseKet out(k, k);
            std::uint64_t stream = 0;
            for (const auto& [l, f] : spec.amplitudes) {
                auto va = occupation_vectors(l.n_a, k);
                auto vb = occupation_vectors(l.n_b, k);
                if (va.size() * vb.size() > 2000)
                    throw CapacityError("sector (" + std::to_string(l.n_a) + "," + std::to_string(l.n_b) +
                                        ") is too large for a Haar rotation");
                auto eng = stream_engine(seed, stream++);
                std::normal_distribution<double> normal(0.0, 1.0);
                std::vector<Complex> v;
                double n2 = 0.0;
                for (std::size_t i = 0; i < va.size() * vb.size(); ++i) {
                    double re = normal(eng);
                    double im = normal(eng);
                    v.emplace_back(re, im);
                    n2 += re * re + im * im;
                }
                const double inv = 1.0 / std::sqrt(n2);
                std::size_t i = 0;
                for (const auto& x : va)
                    for (const auto& y : vb) out.add({x, y}, f * v[i++] * inv);
            }
            return out;
        }
    }
    return base;
}

InvarianceReport invariance_check(const AncillaSpec& spec, std::span<const std::uint64_t> seeds,
                                  const SourceParams& p, double tolerance) {
    InvarianceReport rep;
    rep.baseline = qfi_ratio_end_to_end(spec, p).ratio;
    for (std::uint64_t s : seeds) {
        RotationKind kind = s % 2 == 0 ? RotationKind::sector_haar : RotationKind::passive_optics;
        double r = qfi_ratio_end_to_end(rotate_ancilla(spec, kind, s), p).ratio;
        rep.ratios.push_back(r);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(r - rep.baseline));
    }
    rep.consistent = rep.max_deviation <= tolerance;
    return rep;
}

}  // namespace ssrt
