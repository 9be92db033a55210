// One-shot and asymptotic capacities of the binary alphabet, and the
// mutual information between an ensemble of pure states and the outcomes of
// a von Neumann measurement. Everything is in bits.

#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "superadd/errors.hpp"
#include "superadd/statespace.hpp"
#include "superadd/sweep_table.hpp"

namespace superadd {

inline constexpr double kClampFloor = -1e-12;

/// Maps probabilities in [-1e-12, 0) to 0; anything further below is an error.
inline double clamp_probability(double x) {
    if (x < kClampFloor || std::isnan(x)) {
        throw DomainError("negative probability " + std::to_string(x));
    }
    return x < 0.0 ? 0.0 : x;
}

/// x log2 x with 0 log 0 = 0.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("binary_entropy: argument must lie in [0, 1], got " + std::to_string(x));
    }
    return 0.0 - xlog2x(x) - xlog2x(1.0 - x);
}

/// Shannon entropy of a probability vector, after clamping round-off negatives.
inline double shannon_entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) {
        h -= xlog2x(clamp_probability(p));
    }
    return h;
}

/// One-shot capacity: 1/2 (1+s) log2(1+s) + 1/2 (1-s) log2(1-s), s = sin(gamma).
inline double c1(Angle gamma) {
    require_overlap_angle(gamma, "c1");
    const double s = std::sin(gamma.rad());
    // log1p keeps full relative precision as s -> 0.
    const double plus = (1.0 + s) * std::log1p(s);
    const double minus = s < 1.0 ? (1.0 - s) * std::log1p(-s) : 0.0;
    return 0.5 * (plus + minus) / std::numbers::ln2;
}

/// Asymptotic (Holevo) capacity: H2((1 - cos gamma) / 2).
inline double c_infinity(Angle gamma) {
    require_overlap_angle(gamma, "c_infinity");
    return binary_entropy(0.5 * (1.0 - std::cos(gamma.rad())));
}

/// Rows (gamma, C1, Cinf, Cinf/C1). gamma = 0 is rejected since both vanish.
inline SweepTable ratio_curve(std::span<const Angle> gammas) {
    std::vector<double> deg, one, inf, ratio;
    for (Angle g : gammas) {
        require_overlap_angle(g, "ratio_curve");
        if (g.rad() == 0.0) {
            throw DomainError("ratio_curve: ratio undefined at gamma = 0");
        }
        deg.push_back(g.deg());
        one.push_back(c1(g));
        inf.push_back(c_infinity(g));
        ratio.push_back(inf.back() / one.back());
    }
    SweepTable table(std::move(deg));
    table.add_column("c1", std::move(one));
    table.add_column("cinf", std::move(inf));
    table.add_column("ratio", std::move(ratio));
    return table;
}

struct Letter {
    double prior;
    StateVector state;
};

/// Prior-weighted pure states, all of one dimension.
class Ensemble {
public:
    explicit Ensemble(std::vector<Letter> letters) : letters_(std::move(letters)) {
        if (letters_.empty()) {
            throw DomainError("Ensemble: no letters");
        }
        double total = 0.0;
        for (const auto &l : letters_) {
            if (!(l.prior >= 0.0)) {
                throw DomainError("Ensemble: negative prior");
            }
            if (l.state.dim() != letters_.front().state.dim()) {
                throw DomainError("Ensemble: states of different dimension");
            }
            total += l.prior;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw DomainError("Ensemble: priors sum to " + std::to_string(total));
        }
    }

    std::size_t size() const { return letters_.size(); }
    Eigen::Index dim() const { return letters_.front().state.dim(); }
    const Letter &operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<Letter> &letters() const { return letters_; }

    Eigen::VectorXd priors() const {
        Eigen::VectorXd p(static_cast<Eigen::Index>(size()));
        for (std::size_t i = 0; i < size(); ++i) {
            p[static_cast<Eigen::Index>(i)] = letters_[i].prior;
        }
        return p;
    }

    /// States as the rows of a size x dim matrix.
    Eigen::MatrixXd states() const {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(size()), dim());
        for (std::size_t i = 0; i < size(); ++i) {
            m.row(static_cast<Eigen::Index>(i)) = letters_[i].state.coords().transpose();
        }
        return m;
    }

private:
    std::vector<Letter> letters_;
};

/// Optimized rate in bits per transmission plus whatever produced it.
struct RateResult {
    double bits_per_transmission = 0.0;
    std::map<std::string, double> params;
    int iterations = 0;
    bool converged = false;
    std::string label;
};

namespace detail {

/// I(X;K) in bits where P(k|x) = amps(x,k)^2. No validation; callers
/// guarantee that every row of squared amplitudes sums to one.
template <typename P, typename A>
double mutual_information_bits(const Eigen::MatrixBase<P> &priors, const Eigen::MatrixBase<A> &amps) {
    constexpr int kMaxOutcomes = 16;
    const Eigen::Index n_states = amps.rows();
    const Eigen::Index n_out = amps.cols();
    double marginal[kMaxOutcomes] = {};
    double conditional = 0.0;
    for (Eigen::Index x = 0; x < n_states; ++x) {
        const double px = priors[x];
        if (px <= 0.0) {
            continue;
        }
        double hx = 0.0;
        for (Eigen::Index k = 0; k < n_out; ++k) {
            const double q = amps(x, k) * amps(x, k);
            marginal[k] += px * q;
            hx -= xlog2x(q);
        }
        conditional += px * hx;
    }
    double h = 0.0;
    for (Eigen::Index k = 0; k < n_out; ++k) {
        h -= xlog2x(marginal[k]);
    }
    return h - conditional;
}

} // namespace detail

/// H_E(rho) - sum_x p(x) H_E(|psi_x>) for E_k = |e_k><e_k|. Not divided by
/// block length.
inline double measured_mutual_information(const Ensemble &ens, const MeasurementBasis &basis) {
    if (ens.dim() != basis.dim()) {
        throw DomainError("measured_mutual_information: ensemble and basis dimensions differ");
    }
    if (basis.count() > 16) {
        throw DomainError("measured_mutual_information: at most 16 outcomes supported");
    }
    const Eigen::MatrixXd amps = ens.states() * basis.rows().transpose();
    for (Eigen::Index x = 0; x < amps.rows(); ++x) {
        const double total = amps.row(x).squaredNorm();
        if (std::abs(total - 1.0) > kOrthoTolerance) {
            throw CompletenessError("measured_mutual_information: outcome probabilities for letter " +
                                    std::to_string(x) + " sum to " + std::to_string(total));
        }
    }
    return detail::mutual_information_bits(ens.priors(), amps);
}

} // namespace superadd
