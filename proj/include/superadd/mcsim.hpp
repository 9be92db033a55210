// Born-rule sampling of (letter, outcome) pairs and plug-in estimation of
// the mutual information from the resulting counts.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "superadd/capacities.hpp"
#include "superadd/optimize.hpp"
#include "superadd/parallel.hpp"
#include "superadd/statespace.hpp"
#include "superadd/twoshot.hpp"

namespace superadd {

struct SimConfig {
    std::uint64_t samples;
    std::uint64_t seed;
    Ensemble ensemble;
    MeasurementBasis basis;

    void validate() const {
        if (samples < 1) {
            throw DomainError("SimConfig: samples must be at least 1");
        }
        if (ensemble.dim() != basis.dim()) {
            throw DomainError("SimConfig: ensemble and basis dimensions differ");
        }
        const Eigen::MatrixXd amps = ensemble.states() * basis.rows().transpose();
        for (Eigen::Index x = 0; x < amps.rows(); ++x) {
            if (std::abs(amps.row(x).squaredNorm() - 1.0) > kOrthoTolerance) {
                throw CompletenessError("SimConfig: basis is not complete on the ensemble span");
            }
        }
    }
};

/// Letter x outcome contingency table.
class JointCounts {
public:
    JointCounts(std::size_t letters, std::size_t outcomes)
        : letters_(letters), outcomes_(outcomes), counts_(letters * outcomes, 0) {}

    std::size_t letters() const { return letters_; }
    std::size_t outcomes() const { return outcomes_; }
    std::uint64_t total() const { return total_; }

    std::uint64_t operator()(std::size_t x, std::size_t k) const { return counts_[x * outcomes_ + k]; }

    void add(std::size_t x, std::size_t k, std::uint64_t n = 1) {
        counts_[x * outcomes_ + k] += n;
        total_ += n;
    }

    JointCounts &operator+=(const JointCounts &o) {
        if (o.letters_ != letters_ || o.outcomes_ != outcomes_) {
            throw DomainError("JointCounts: shape mismatch");
        }
        for (std::size_t i = 0; i < counts_.size(); ++i) {
            counts_[i] += o.counts_[i];
        }
        total_ += o.total_;
        return *this;
    }

    friend bool operator==(const JointCounts &, const JointCounts &) = default;

private:
    std::size_t letters_;
    std::size_t outcomes_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

inline constexpr std::uint64_t kTrialBlock = 1u << 16;

/// Draws x ~ priors then k ~ |<e_k|psi_x>|^2, `samples` times. Trials are
/// split into fixed blocks, each with its own stream derived from the seed,
/// so the counts do not depend on the number of threads.
inline JointCounts simulate(const SimConfig &cfg, unsigned threads = default_thread_count()) {
    cfg.validate();
    const Eigen::MatrixXd amps = cfg.ensemble.states() * cfg.basis.rows().transpose();
    const auto n_letters = static_cast<std::size_t>(amps.rows());
    const auto n_out = static_cast<std::size_t>(amps.cols());

    std::vector<double> priors(n_letters);
    std::vector<std::vector<double>> born(n_letters, std::vector<double>(n_out));
    for (std::size_t x = 0; x < n_letters; ++x) {
        priors[x] = cfg.ensemble[x].prior;
        for (std::size_t k = 0; k < n_out; ++k) {
            const double a = amps(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k));
            born[x][k] = a * a;
        }
    }

    const std::uint64_t blocks = (cfg.samples + kTrialBlock - 1) / kTrialBlock;
    auto run_block = [&](std::size_t b) {
        std::mt19937_64 rng(derive_stream_seed(cfg.seed, b));
        std::discrete_distribution<std::size_t> letter(priors.begin(), priors.end());
        std::vector<std::discrete_distribution<std::size_t>> outcome;
        for (const auto &row : born) {
            outcome.emplace_back(row.begin(), row.end());
        }
        const std::uint64_t begin = b * kTrialBlock;
        const std::uint64_t end = std::min(cfg.samples, begin + kTrialBlock);
        JointCounts counts(n_letters, n_out);
        for (std::uint64_t t = begin; t < end; ++t) {
            const std::size_t x = letter(rng);
            counts.add(x, outcome[x](rng));
        }
        return counts;
    };
    const auto parts = parallel_map(static_cast<std::size_t>(blocks), run_block, threads);
    JointCounts total(n_letters, n_out);
    for (const auto &p : parts) {
        total += p;
    }
    return total;
}

/// Plug-in mutual information in bits, without bias correction.
inline double plugin_mi(const JointCounts &counts) {
    if (counts.total() < 1) {
        throw DomainError("plugin_mi: empty counts");
    }
    const double n = static_cast<double>(counts.total());
    std::vector<double> row(counts.letters(), 0.0), col(counts.outcomes(), 0.0);
    double h_joint = 0.0;
    for (std::size_t x = 0; x < counts.letters(); ++x) {
        for (std::size_t k = 0; k < counts.outcomes(); ++k) {
            const double q = static_cast<double>(counts(x, k)) / n;
            row[x] += q;
            col[k] += q;
            h_joint -= xlog2x(q);
        }
    }
    double h_row = 0.0, h_col = 0.0;
    for (double q : row) {
        h_row -= xlog2x(q);
    }
    for (double q : col) {
        h_col -= xlog2x(q);
    }
    return h_row + h_col - h_joint;
}

/// Plug-in estimate with the Miller–Madow correction (m - 1) / (2N ln 2)
/// applied to each of the three entropies, m being its number of occupied cells.
inline double empirical_mi(const JointCounts &counts) {
    const double plug = plugin_mi(counts);
    std::size_t m_joint = 0;
    std::vector<bool> row_used(counts.letters(), false), col_used(counts.outcomes(), false);
    for (std::size_t x = 0; x < counts.letters(); ++x) {
        for (std::size_t k = 0; k < counts.outcomes(); ++k) {
            if (counts(x, k) > 0) {
                ++m_joint;
                row_used[x] = true;
                col_used[k] = true;
            }
        }
    }
    auto occupied = [](const std::vector<bool> &v) { return static_cast<double>(std::count(v.begin(), v.end(), true)); };
    const double m_row = occupied(row_used);
    const double m_col = occupied(col_used);
    const double n = static_cast<double>(counts.total());
    const double correction =
        ((m_row - 1.0) + (m_col - 1.0) - (static_cast<double>(m_joint) - 1.0)) / (2.0 * n * std::numbers::ln2);
    return plug + correction;
}

/// Standard deviation of empirical_mi over multinomial resamples of the
/// observed table.
inline double bootstrap_standard_error(const JointCounts &counts, int resamples, std::uint64_t seed) {
    if (resamples < 2) {
        throw DomainError("bootstrap_standard_error: need at least two resamples");
    }
    const std::size_t cells = counts.letters() * counts.outcomes();
    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        std::mt19937_64 rng(derive_stream_seed(seed, static_cast<std::uint64_t>(r)));
        JointCounts draw(counts.letters(), counts.outcomes());
        std::uint64_t remaining_n = counts.total();
        std::uint64_t remaining_mass = counts.total();
        for (std::size_t c = 0; c < cells && remaining_n > 0; ++c) {
            const std::size_t x = c / counts.outcomes();
            const std::size_t k = c % counts.outcomes();
            const std::uint64_t observed = counts(x, k);
            std::uint64_t got = 0;
            if (c + 1 == cells || observed == remaining_mass) {
                got = remaining_n;
            } else if (observed > 0) {
                std::binomial_distribution<std::uint64_t> bin(
                    remaining_n, static_cast<double>(observed) / static_cast<double>(remaining_mass));
                got = bin(rng);
            }
            draw.add(x, k, got);
            remaining_n -= got;
            remaining_mass -= observed;
        }
        estimates.push_back(empirical_mi(draw));
    }
    double mean = 0.0;
    for (double e : estimates) {
        mean += e;
    }
    mean /= resamples;
    double ss = 0.0;
    for (double e : estimates) {
        ss += (e - mean) * (e - mean);
    }
    return std::sqrt(ss / (resamples - 1));
}

struct MonteCarloReport {
    double analytic_rate;  ///< bits per transmission
    double empirical_rate; ///< bits per transmission
    double standard_error; ///< of empirical_rate
    double eta;
    double p;
    JointCounts counts;

    bool consistent(double sigmas = 3.0) const {
        return std::abs(empirical_rate - analytic_rate) <= sigmas * standard_error;
    }
};

/// Samples the optimal ansatz setup at gamma and compares the estimated
/// rate with the analytic one.
inline MonteCarloReport validate_ansatz(Angle gamma, std::uint64_t samples, std::uint64_t seed, int resamples = 100) {
    const RateResult best = optimize_r2(gamma);
    const double eta = best.params.at("eta");
    const double p = best.params.at("p");
    const TwoShotAlphabet abc = two_shot_alphabet(gamma);
    const SimConfig cfg{samples, seed, ansatz_ensemble(abc, p), ansatz_basis(eta, gamma)};
    JointCounts counts = simulate(cfg);
    const double mi = empirical_mi(counts);
    const double se = bootstrap_standard_error(counts, resamples, derive_stream_seed(seed, 0xB007));
    return {best.bits_per_transmission, 0.5 * mi, 0.5 * se, eta, p, std::move(counts)};
}

} // namespace superadd
