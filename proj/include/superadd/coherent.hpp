// Weak coherent-state alphabet |+alpha>, |-alpha> truncated to zero and one
// photon, with the two transmissions carried on the + and - circular
// polarization modes. Two-shot photon coordinates are ordered
//   |0>+|0>-, |0>+|1>-, |1>+|0>-, |1>+|1>-.
//
// The experimentally simple measurement drops the |1>+|1>- amplitude of each
// ansatz vector and re-orthonormalizes symmetrically. Since the resulting
// three vectors span only the c11 = 0 subspace, the two-photon state |1>+|1>-
// is kept as a fourth outcome so the measurement is complete on the signals.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "superadd/capacities.hpp"
#include "superadd/statespace.hpp"
#include "superadd/twoshot.hpp"

namespace superadd {

struct PhotonBasisVector {
    double c00 = 0.0;
    double c01 = 0.0;
    double c10 = 0.0;
    double c11 = 0.0;

    Eigen::Vector4d coords() const { return {c00, c01, c10, c11}; }
    static PhotonBasisVector from(const Eigen::Vector4d &v) { return {v[0], v[1], v[2], v[3]}; }
};

/// Real coherent amplitude with the same overlap as the abstract alphabet:
/// sqrt((1 - cos gamma) / (1 + cos gamma)).
inline double alpha_from_gamma(Angle gamma) {
    require_overlap_angle(gamma, "alpha_from_gamma");
    const double c = std::cos(gamma.rad());
    return std::sqrt((1.0 - c) / (1.0 + c));
}

struct CoherentAlphabet {
    double alpha;
    StateVector psi0; ///< (1, alpha) / sqrt(1 + alpha^2) on |0>, |1>
    StateVector psi1; ///< (1, -alpha) / sqrt(1 + alpha^2)
};

inline CoherentAlphabet coherent_alphabet(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError("coherent_alphabet: alpha must be finite and non-negative");
    }
    const double n = std::sqrt(1.0 + alpha * alpha);
    Eigen::VectorXd p0(2), p1(2);
    p0 << 1.0 / n, alpha / n;
    p1 << 1.0 / n, -alpha / n;
    return {alpha, StateVector::normalized(p0), StateVector::normalized(p1)};
}

inline CoherentAlphabet coherent_alphabet(Angle gamma) { return coherent_alphabet(alpha_from_gamma(gamma)); }

/// a = psi0 psi1, b = psi1 psi0, c = psi0 psi0, d = psi1 psi1 in photon coordinates.
inline TwoShotAlphabet coherent_two_shot(Angle gamma) {
    const CoherentAlphabet al = coherent_alphabet(gamma);
    return two_shot_from(al.psi0, al.psi1);
}

/// Ansatz measurement written out in photon-number coordinates as explicit
/// functions of (alpha, eta).
inline std::array<PhotonBasisVector, 3> photon_basis(double eta, Angle gamma) {
    require_positive_overlap_angle(gamma, "photon_basis");
    const double al = alpha_from_gamma(gamma);
    const double a2 = al * al;
    const double rs = std::numbers::sqrt2 * std::sin(eta);
    const double ce = std::cos(eta);
    const double den = 2.0 * (1.0 + a2);

    PhotonBasisVector e1{(rs + 2.0 * al * ce) / den,
                         (al * rs - ce + a2 * ce - 1.0 - a2) / den,
                         (al * rs - ce + a2 * ce + 1.0 + a2) / den,
                         (a2 * rs - 2.0 * al * ce) / den};
    PhotonBasisVector e2{e1.c00, e1.c10, e1.c01, e1.c11};
    PhotonBasisVector e3{(ce - al * rs) / (1.0 + a2),
                         (rs * (1.0 - a2) + 2.0 * al * ce) / den,
                         (rs * (1.0 - a2) + 2.0 * al * ce) / den,
                         (al * rs + a2 * ce) / (1.0 + a2)};
    return {e1, e2, e3};
}

/// Drops the |1>+|1>- component of each photon_basis vector and applies the
/// symmetric M^{-1/2} orthonormalization on the c11 = 0 subspace. The
/// outputs have c11 == 0 exactly.
inline MeasurementBasis truncated_orthonormal_basis(double eta, Angle gamma) {
    const auto full = photon_basis(eta, gamma);
    std::vector<Eigen::VectorXd> truncated;
    for (const auto &e : full) {
        Eigen::VectorXd v(3);
        v << e.c00, e.c01, e.c10;
        truncated.push_back(std::move(v));
    }
    const MeasurementBasis reduced = lowdin_orthogonalize(std::span<const Eigen::VectorXd>(truncated));
    std::vector<StateVector> out;
    for (const auto &v : reduced.vectors()) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(4);
        w.head(3) = v.coords();
        out.emplace_back(std::move(w));
    }
    return MeasurementBasis(std::move(out));
}

/// truncated_orthonormal_basis plus the two-photon outcome |1>+|1>-.
inline MeasurementBasis truncated_measurement(double eta, Angle gamma) {
    std::vector<StateVector> vs = truncated_orthonormal_basis(eta, gamma).vectors();
    vs.push_back(StateVector{0.0, 0.0, 0.0, 1.0});
    return MeasurementBasis(std::move(vs));
}

/// Rate in bits per transmission of the truncated measurement on the
/// coherent (p, p, 1-2p) ensemble.
inline double truncated_rate(double eta, double p, Angle gamma) {
    AnsatzParams{eta, p}.validate();
    const TwoShotAlphabet abc = coherent_two_shot(gamma);
    return 0.5 * measured_mutual_information(ansatz_ensemble(abc, p), truncated_measurement(eta, gamma));
}

namespace detail {

class TruncatedRate {
public:
    explicit TruncatedRate(Angle gamma) : gamma_(gamma) {
        const TwoShotAlphabet abc = coherent_two_shot(gamma);
        states_.row(0) = abc.a.coords().transpose();
        states_.row(1) = abc.b.coords().transpose();
        states_.row(2) = abc.c.coords().transpose();
    }

    double operator()(double eta, double p) const {
        const Eigen::MatrixXd rows = truncated_measurement(eta, gamma_).rows();
        const Eigen::MatrixXd amps = states_ * rows.transpose();
        const Eigen::Vector3d priors(p, p, 1.0 - 2.0 * p);
        return 0.5 * mutual_information_bits(priors, amps);
    }

private:
    Angle gamma_;
    Eigen::Matrix<double, 3, 4> states_;
};

} // namespace detail

/// Truncated-measurement rate maximized over both eta and p.
inline RateResult optimize_r2_truncated(Angle gamma, const AnsatzSearchOptions &opt = {}) {
    require_positive_overlap_angle(gamma, "optimize_r2_truncated");
    const detail::TruncatedRate r(gamma);
    RateResult out = maximize_ansatz([&](double eta, double p) { return r(eta, p); }, gamma.rad(), opt);
    out.label = "truncated, eta re-optimized";
    return out;
}

/// Truncated-measurement rate at the ideal ansatz eta*, maximized over p only.
inline RateResult optimize_r2_truncated_reused_eta(Angle gamma, const AnsatzSearchOptions &opt = {}) {
    require_positive_overlap_angle(gamma, "optimize_r2_truncated_reused_eta");
    const double eta = optimize_r2(gamma, opt).params.at("eta");
    const detail::TruncatedRate r(gamma);

    double best = -std::numeric_limits<double>::infinity();
    double best_p = 0.0;
    for (int j = 0; j < opt.p_points; ++j) {
        const double p = 0.5 * j / (opt.p_points - 1);
        const double v = r(eta, p);
        if (v > best) {
            best = v;
            best_p = p;
        }
    }
    auto clamp_p = [](double p) { return std::clamp(p, 0.0, 0.5); };
    const double scale = best > 0.0 ? best : 1.0;
    const MinimizeResult local = nelder_mead(
        [&](const std::vector<double> &x) { return -r(eta, clamp_p(x[0])) / scale; }, {best_p}, opt.refine);
    if (-local.value * scale >= best) {
        best = -local.value * scale;
        best_p = clamp_p(local.x[0]);
    }

    RateResult out;
    out.bits_per_transmission = best;
    out.params = {{"eta", eta}, {"p", best_p}, {"p_points", opt.p_points}, {"nm_ftol", opt.refine.ftol}};
    out.iterations = local.evaluations + opt.p_points;
    out.converged = local.converged;
    out.label = "truncated, ideal eta";
    return out;
}

} // namespace superadd
