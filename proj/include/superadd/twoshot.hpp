// Two-shot collective decoding of the binary alphabet.
//
// The symmetric ansatz restricts the prior to (p, p, 1-2p, 0) on the
// effective letters (a, b, c, d) and the measurement to a one-parameter
// family e1(eta), e2(eta), e3(eta) in span{a, b, c} fixed by
//   <c|e3> = cos eta,  <a|e1> = <b|e2>,  <a|e3> = <b|e3>,  <c|e1> = <c|e2>.
// optimize_general drops both restrictions and searches all priors on
// {a, b, c, d} and all orthonormal bases of the 4-dim two-shot space.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "superadd/capacities.hpp"
#include "superadd/errors.hpp"
#include "superadd/optimize.hpp"
#include "superadd/statespace.hpp"

namespace superadd {

struct AnsatzParams {
    double eta = 0.0;
    /// Prior of each of a and b; c gets 1 - 2p, d gets nothing.
    double p = 0.0;

    void validate() const {
        if (!(p >= 0.0 && p <= 0.5)) {
            throw DomainError("AnsatzParams: p must lie in [0, 1/2], got " + std::to_string(p));
        }
        if (!std::isfinite(eta)) {
            throw DomainError("AnsatzParams: eta is not finite");
        }
    }
};

/// d(d-1)/2 Givens angles. The matrix is the ordered product
/// G(0,1) G(0,2) ... G(0,d-1) G(1,2) ... G(d-2,d-1), where G(i,j) rotates
/// the (i,j) coordinate plane.
struct RotationParams {
    std::vector<double> angles;

    static std::size_t angle_count(Eigen::Index dim) { return static_cast<std::size_t>(dim * (dim - 1) / 2); }

    Eigen::MatrixXd matrix(Eigen::Index dim) const {
        if (angles.size() != angle_count(dim)) {
            throw DomainError("RotationParams: expected " + std::to_string(angle_count(dim)) + " angles");
        }
        Eigen::MatrixXd q = Eigen::MatrixXd::Identity(dim, dim);
        std::size_t k = 0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = i + 1; j < dim; ++j) {
                const double c = std::cos(angles[k]);
                const double s = std::sin(angles[k]);
                ++k;
                // q <- q * G(i,j): only columns i and j change.
                const Eigen::VectorXd qi = q.col(i);
                q.col(i) = c * qi + s * q.col(j);
                q.col(j) = -s * qi + c * q.col(j);
            }
        }
        return q;
    }
};

/// Orthonormal frame of span{a, b, c} adapted to the a <-> b exchange:
/// `c` itself, `sym` the unit part of a + b orthogonal to c, and `anti`
/// along a - b. Built by Gram–Schmidt from exact differences, so it stays
/// well conditioned as gamma -> 0.
struct SymmetricFrame {
    Eigen::VectorXd c;
    Eigen::VectorXd sym;
    Eigen::VectorXd anti;

    static SymmetricFrame of(const TwoShotAlphabet &abc) {
        const Eigen::VectorXd &a = abc.a.coords();
        const Eigen::VectorXd &b = abc.b.coords();
        const Eigen::VectorXd &c = abc.c.coords();
        Eigen::VectorXd sum = a + b;
        sum -= c.dot(sum) * c;
        const Eigen::VectorXd diff = a - b;
        if (!(sum.norm() > 0.0) || !(diff.norm() > 0.0)) {
            throw DomainError("SymmetricFrame: letters a, b, c are not independent");
        }
        return {c, sum.normalized(), diff.normalized()};
    }

    /// Rows e1, e2, e3 of the ansatz measurement.
    Eigen::MatrixXd ansatz_rows(double eta) const {
        const double ce = std::cos(eta);
        const double se = std::sin(eta);
        const Eigen::VectorXd e3 = ce * c - se * sym;
        const Eigen::VectorXd in_plane = se * c + ce * sym;
        Eigen::MatrixXd rows(3, c.size());
        rows.row(0) = (in_plane + anti).transpose() / std::numbers::sqrt2;
        rows.row(1) = (in_plane - anti).transpose() / std::numbers::sqrt2;
        rows.row(2) = e3.transpose();
        return rows;
    }
};

inline MeasurementBasis basis_from_rows(const Eigen::MatrixXd &rows) {
    std::vector<StateVector> vs;
    for (Eigen::Index k = 0; k < rows.rows(); ++k) {
        vs.push_back(StateVector::normalized(rows.row(k).transpose()));
    }
    return MeasurementBasis(std::move(vs));
}

/// Ansatz measurement e1, e2, e3 in the 4-dim two-shot coordinates.
inline MeasurementBasis ansatz_basis(double eta, Angle gamma) {
    require_positive_overlap_angle(gamma, "ansatz_basis");
    return basis_from_rows(SymmetricFrame::of(two_shot_alphabet(gamma)).ansatz_rows(eta));
}

inline Ensemble ansatz_ensemble(const TwoShotAlphabet &abc, double p) {
    return Ensemble({{p, abc.a}, {p, abc.b}, {1.0 - 2.0 * p, abc.c}});
}

/// R(eta, p, gamma) in bits per transmission: the measured mutual
/// information of the ansatz ensemble and basis, halved.
inline double rate(double eta, double p, Angle gamma) {
    AnsatzParams{eta, p}.validate();
    require_positive_overlap_angle(gamma, "rate");
    const TwoShotAlphabet abc = two_shot_alphabet(gamma);
    const MeasurementBasis basis = basis_from_rows(SymmetricFrame::of(abc).ansatz_rows(eta));
    return 0.5 * measured_mutual_information(ansatz_ensemble(abc, p), basis);
}

/// Fast evaluator of a (p, p, 1-2p) ansatz rate for fixed letters and a
/// basis family; skips per-call validation.
class AnsatzRate {
public:
    explicit AnsatzRate(Angle gamma) : AnsatzRate(checked_alphabet(gamma)) {}

    explicit AnsatzRate(const TwoShotAlphabet &abc) : frame_(SymmetricFrame::of(abc)) {
        states_.resize(3, abc.a.dim());
        states_.row(0) = abc.a.coords().transpose();
        states_.row(1) = abc.b.coords().transpose();
        states_.row(2) = abc.c.coords().transpose();
    }

    double operator()(double eta, double p) const {
        const Eigen::MatrixXd amps = states_ * frame_.ansatz_rows(eta).transpose();
        const Eigen::Vector3d priors(p, p, 1.0 - 2.0 * p);
        return 0.5 * detail::mutual_information_bits(priors, amps);
    }

private:
    static TwoShotAlphabet checked_alphabet(Angle gamma) {
        require_positive_overlap_angle(gamma, "AnsatzRate");
        return two_shot_alphabet(gamma);
    }

    SymmetricFrame frame_;
    Eigen::MatrixXd states_;
};

struct AnsatzSearchOptions {
    int eta_points = 200;
    int p_points = 101;
    /// Extra eta samples across pi/2 +- band_halfwidths * width; at small
    /// gamma the optimum is a peak of width ~gamma next to pi/2, far
    /// narrower than the uniform grid spacing.
    int band_points = 200;
    double band_halfwidths = 4.0;
    NelderMeadOptions refine{0.02, 1e-10, 1e-9, 20000, 2};
};

/// Maximizes score(eta, p) over eta in [0, pi), p in [0, 1/2]: a coarse grid
/// (ties go to the smallest eta, then the smallest p) followed by Nelder–Mead
/// from the best cell. `width` is the eta scale of the finest feature of the
/// landscape; it sets the refinement band and the initial simplex size. The
/// local search runs on the score divided by the grid maximum, so its
/// tolerances are relative.
template <typename Score>
RateResult maximize_ansatz(Score &&score, double width, const AnsatzSearchOptions &opt = {}) {
    if (opt.eta_points < 1 || opt.p_points < 2 || opt.band_points < 0) {
        throw DomainError("maximize_ansatz: grid too small");
    }
    if (!(width > 0.0)) {
        throw DomainError("maximize_ansatz: width must be positive");
    }
    std::vector<double> etas;
    for (int i = 0; i < opt.eta_points; ++i) {
        etas.push_back(std::numbers::pi * i / opt.eta_points);
    }
    const double half = std::min(opt.band_halfwidths * width, std::numbers::pi / 2);
    for (int i = 0; i < opt.band_points; ++i) {
        const double t = opt.band_points == 1 ? 0.0 : 2.0 * i / (opt.band_points - 1) - 1.0;
        etas.push_back(std::clamp(std::numbers::pi / 2 + half * t, 0.0, std::numbers::pi));
    }
    std::sort(etas.begin(), etas.end());

    double best = -std::numeric_limits<double>::infinity();
    double best_eta = 0.0, best_p = 0.0;
    for (double eta : etas) {
        for (int j = 0; j < opt.p_points; ++j) {
            const double p = 0.5 * j / (opt.p_points - 1);
            const double v = score(eta, p);
            if (v > best) {
                best = v;
                best_eta = eta;
                best_p = p;
            }
        }
    }

    const double scale = best > 0.0 ? best : 1.0;
    NelderMeadOptions local_opt = opt.refine;
    local_opt.initial_step = std::min(local_opt.initial_step, width);
    auto clamp_p = [](double p) { return std::clamp(p, 0.0, 0.5); };
    auto objective = [&](const std::vector<double> &x) { return -score(x[0], clamp_p(x[1])) / scale; };
    const MinimizeResult local = nelder_mead(objective, {best_eta, best_p}, local_opt);

    RateResult out;
    double eta = best_eta, p = best_p;
    if (-local.value * scale >= best) {
        best = -local.value * scale;
        eta = local.x[0];
        p = clamp_p(local.x[1]);
    }
    eta = std::fmod(eta, std::numbers::pi);
    if (eta < 0) {
        eta += std::numbers::pi;
    }
    out.bits_per_transmission = best;
    out.params = {{"eta", eta},
                  {"p", p},
                  {"eta_points", opt.eta_points},
                  {"p_points", opt.p_points},
                  {"band_points", opt.band_points},
                  {"nm_ftol", opt.refine.ftol}};
    out.iterations = local.evaluations + static_cast<int>(etas.size()) * opt.p_points;
    out.converged = local.converged;
    out.label = "ansatz";
    return out;
}

/// R2(gamma) = max over (eta, p) of the ansatz rate.
inline RateResult optimize_r2(Angle gamma, const AnsatzSearchOptions &opt = {}) {
    require_positive_overlap_angle(gamma, "optimize_r2");
    const AnsatzRate r(gamma);
    return maximize_ansatz([&](double eta, double p) { return r(eta, p); }, gamma.rad(), opt);
}

struct GeneralSearchOptions {
    int restarts = 20;
    AnnealOptions anneal{};
    NelderMeadOptions polish{0.05, 1e-12, 1e-9, 20000, 2};
    /// Also polish from the ansatz optimum and the one-shot product measurement.
    bool warm_starts = true;
};

namespace detail {

/// Prior on four letters from three hyperspherical angles; every boundary
/// face of the simplex is reachable.
inline Eigen::Vector4d simplex_from_angles(const double *t) {
    const double s0 = std::sin(t[0]) * std::sin(t[0]);
    const double s1 = std::sin(t[1]) * std::sin(t[1]);
    const double s2 = std::sin(t[2]) * std::sin(t[2]);
    return {1.0 - s0, s0 * (1.0 - s1), s0 * s1 * (1.0 - s2), s0 * s1 * s2};
}

inline std::array<double, 3> angles_from_simplex(const Eigen::Vector4d &p) {
    std::array<double, 3> t{};
    double rest = 1.0;
    for (int i = 0; i < 3; ++i) {
        const double frac = rest > 0.0 ? std::clamp(p[i] / rest, 0.0, 1.0) : 1.0;
        t[static_cast<std::size_t>(i)] = std::acos(std::sqrt(frac));
        rest -= p[i];
    }
    return t;
}

/// Mutual information per transmission for the 9-parameter general search:
/// three prior angles, six Givens angles applied on the left of `reference`.
class GeneralObjective {
public:
    GeneralObjective(const TwoShotAlphabet &abcd, Eigen::Matrix4d reference) : reference_(std::move(reference)) {
        states_.row(0) = abcd.a.coords().transpose();
        states_.row(1) = abcd.b.coords().transpose();
        states_.row(2) = abcd.c.coords().transpose();
        states_.row(3) = abcd.d.coords().transpose();
    }

    Eigen::Matrix4d basis_rows(const std::vector<double> &x) const {
        RotationParams rot{{x.begin() + 3, x.end()}};
        return rot.matrix(4) * reference_;
    }

    double rate(const std::vector<double> &x) const {
        const Eigen::Vector4d priors = simplex_from_angles(x.data());
        const Eigen::Matrix4d amps = states_ * basis_rows(x).transpose();
        return 0.5 * mutual_information_bits(priors, amps);
    }

private:
    Eigen::Matrix4d reference_;
    Eigen::Matrix4d states_;
};

} // namespace detail

/// Unconstrained two-shot search over all priors on {a, b, c, d} and all
/// orthonormal bases of the two-shot space: `restarts` seeded annealing runs
/// each followed by Nelder–Mead. The result is a lower bound on the two-shot
/// capacity, never the capacity itself.
inline RateResult optimize_general(Angle gamma, std::uint64_t seed, const GeneralSearchOptions &opt = {}) {
    require_positive_overlap_angle(gamma, "optimize_general");
    if (opt.restarts < 1) {
        throw DomainError("optimize_general: need at least one restart");
    }
    const TwoShotAlphabet abcd = two_shot_alphabet(gamma);

    struct Candidate {
        double rate;
        std::vector<double> x;
        Eigen::Matrix4d reference;
        int origin;
        bool converged;
    };
    std::vector<Candidate> candidates;
    int evaluations = 0;
    double t0_first = 0.0;

    auto polish = [&](const detail::GeneralObjective &obj, std::vector<double> x0, const Eigen::Matrix4d &ref,
                      int origin) {
        const MinimizeResult r =
            nelder_mead([&](const std::vector<double> &x) { return -obj.rate(x); }, std::move(x0), opt.polish);
        evaluations += r.evaluations;
        candidates.push_back({-r.value, r.x, ref, origin, r.converged});
    };

    const Eigen::Matrix4d identity = Eigen::Matrix4d::Identity();
    const detail::GeneralObjective free_obj(abcd, identity);
    for (int r = 0; r < opt.restarts; ++r) {
        std::mt19937_64 rng(derive_stream_seed(seed, static_cast<std::uint64_t>(r)));
        auto sample = [](std::mt19937_64 &g) {
            std::uniform_real_distribution<double> prior_angle(0.0, std::numbers::pi / 2);
            std::uniform_real_distribution<double> rot_angle(-std::numbers::pi, std::numbers::pi);
            std::vector<double> x(9);
            for (int i = 0; i < 3; ++i) {
                x[static_cast<std::size_t>(i)] = prior_angle(g);
            }
            for (int i = 3; i < 9; ++i) {
                x[static_cast<std::size_t>(i)] = rot_angle(g);
            }
            return x;
        };
        const AnnealResult a =
            anneal([&](const std::vector<double> &x) { return -free_obj.rate(x); }, sample, rng, opt.anneal);
        evaluations += a.evaluations;
        if (r == 0) {
            t0_first = a.initial_temperature;
        }
        polish(free_obj, a.x, identity, r);
    }

    if (opt.warm_starts) {
        // Ansatz optimum, completed with the direction orthogonal to span{a,b,c}.
        const RateResult ans = optimize_r2(gamma);
        const double p = ans.params.at("p");
        const MeasurementBasis full = ansatz_basis(ans.params.at("eta"), gamma).completed();
        const Eigen::Matrix4d ref_ans = full.rows();
        const auto ta = detail::angles_from_simplex({p, p, 1.0 - 2.0 * p, 0.0});
        std::vector<double> xa{ta[0], ta[1], ta[2], 0, 0, 0, 0, 0, 0};
        polish(detail::GeneralObjective(abcd, ref_ans), xa, ref_ans, opt.restarts);

        // Product of one-shot optimal measurements (bisecting the two states)
        // with an i.i.d. uniform prior, which achieves C1 per transmission.
        const double g = gamma.rad();
        Eigen::Matrix2d one;
        for (int k = 0; k < 2; ++k) {
            const double phi = g / 2 + (k == 0 ? -1.0 : 1.0) * std::numbers::pi / 4;
            one.row(k) << std::cos(phi), std::sin(phi);
        }
        Eigen::Matrix4d ref_prod;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                ref_prod.block<2, 2>(2 * i, 2 * j) = one(i, j) * one;
            }
        }
        const auto tp = detail::angles_from_simplex({0.25, 0.25, 0.25, 0.25});
        std::vector<double> xp{tp[0], tp[1], tp[2], 0, 0, 0, 0, 0, 0};
        polish(detail::GeneralObjective(abcd, ref_prod), xp, ref_prod, opt.restarts + 1);
    }

    const Candidate *best = &candidates.front();
    for (const auto &c : candidates) {
        if (c.rate > best->rate) {
            best = &c;
        }
    }

    const detail::GeneralObjective obj(abcd, best->reference);
    const Eigen::Vector4d priors = detail::simplex_from_angles(best->x.data());
    RateResult out;
    out.bits_per_transmission = best->rate;
    out.label = "lower bound probe";
    out.iterations = evaluations;
    out.converged = best->converged;
    out.params = {{"p_a", priors[0]},
                  {"p_b", priors[1]},
                  {"p_c", priors[2]},
                  {"p_d", priors[3]},
                  {"best_start", best->origin},
                  {"restarts", opt.restarts},
                  {"cooling", opt.anneal.cooling},
                  {"initial_temperature", t0_first},
                  {"nm_ftol", opt.polish.ftol}};
    for (int i = 0; i < 6; ++i) {
        out.params["theta" + std::to_string(i + 1)] = best->x[static_cast<std::size_t>(3 + i)];
    }
    return out;
}

/// Rebuilds the measurement found by optimize_general-style parameters.
inline MeasurementBasis general_basis(const std::vector<double> &rotation_angles, const Eigen::Matrix4d &reference) {
    return basis_from_rows(RotationParams{rotation_angles}.matrix(4) * reference);
}

/// Overlap angle where rate_fn(gamma) crosses c1(gamma), by bisection on
/// the sign of the difference down to a bracket of `tol_deg` degrees.
template <typename RateFn>
Angle crossover_angle(RateFn &&rate_fn, Angle lo, Angle hi, double tol_deg = 0.01) {
    auto gap = [&](Angle g) { return rate_fn(g) - c1(g); };
    double a = lo.deg(), b = hi.deg();
    double fa = gap(lo), fb = gap(hi);
    if (fa == 0.0) {
        return lo;
    }
    if (fb == 0.0) {
        return hi;
    }
    if ((fa > 0) == (fb > 0)) {
        throw BracketingError("crossover_angle: rate - C1 has the same sign at both ends (" + std::to_string(fa) +
                                  " at " + std::to_string(a) + " deg, " + std::to_string(fb) + " at " +
                                  std::to_string(b) + " deg)",
                              fa, fb);
    }
    while (b - a > tol_deg) {
        const double m = 0.5 * (a + b);
        const double fm = gap(Angle::degrees(m));
        if (fm == 0.0) {
            return Angle::degrees(m);
        }
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return Angle::degrees(0.5 * (a + b));
}

} // namespace superadd
