// Derivative-free minimizers used by the rate searches. Both work on
// std::vector<double> and any callable double(const std::vector<double>&).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace superadd {

/// SplitMix64 finalizer applied to (master, index): an independent 64-bit
/// seed per restart / trial block, regardless of evaluation order.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct NelderMeadOptions {
    double initial_step = 0.1;
    /// Stop once the spread of simplex values drops below this...
    double ftol = 1e-10;
    /// ...and the simplex diameter below this.
    double xtol = 1e-9;
    int max_evaluations = 20000;
    /// Extra runs restarted from the incumbent, to escape a collapsed simplex.
    int restarts = 2;
};

struct MinimizeResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

template <typename F>
MinimizeResult nelder_mead_once(F &f, const std::vector<double> &x0, const NelderMeadOptions &opt) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += opt.initial_step;
    }
    int evals = 0;
    auto eval = [&](const std::vector<double> &x) {
        ++evals;
        return f(x);
    };
    for (std::size_t i = 0; i <= n; ++i) {
        values[i] = eval(simplex[i]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    auto point = [&](double t, std::vector<double> &out, std::size_t worst) {
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
        }
    };

    bool converged = false;
    while (evals < opt.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[best][j]));
            }
        }
        if (values[worst] - values[best] <= opt.ftol && diameter <= opt.xtol) {
            converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                centroid[j] += simplex[i][j] / static_cast<double>(n);
            }
        }

        point(-1.0, trial, worst);
        const double fr = eval(trial);
        if (fr < values[best]) {
            point(-2.0, trial2, worst);
            const double fe = eval(trial2);
            if (fe < fr) {
                simplex[worst] = trial2;
                values[worst] = fe;
            } else {
                simplex[worst] = trial;
                values[worst] = fr;
            }
        } else if (fr < values[second]) {
            simplex[worst] = trial;
            values[worst] = fr;
        } else {
            const bool outside = fr < values[worst];
            point(outside ? -0.5 : 0.5, trial2, worst);
            const double fc = eval(trial2);
            if (fc < (outside ? fr : values[worst])) {
                simplex[worst] = trial2;
                values[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) {
                        continue;
                    }
                    for (std::size_t j = 0; j < n; ++j) {
                        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
                    }
                    values[i] = eval(simplex[i]);
                }
            }
        }
    }

    const auto it = std::min_element(values.begin(), values.end());
    const auto ib = static_cast<std::size_t>(it - values.begin());
    return {simplex[ib], *it, evals, converged};
}

} // namespace detail

/// Nelder–Mead simplex minimization (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2), restarted from the incumbent
/// `opt.restarts` times with a shrinking initial step.
template <typename F>
MinimizeResult nelder_mead(F &&f, std::vector<double> x0, NelderMeadOptions opt = {}) {
    MinimizeResult best = detail::nelder_mead_once(f, x0, opt);
    int total = best.evaluations;
    for (int r = 0; r < opt.restarts; ++r) {
        opt.initial_step = std::max(opt.initial_step * 0.1, 1e-6);
        MinimizeResult next = detail::nelder_mead_once(f, best.x, opt);
        total += next.evaluations;
        if (next.value <= best.value) {
            best = std::move(next);
        }
    }
    best.evaluations = total;
    return best;
}

struct AnnealOptions {
    double cooling = 0.97;
    /// Annealing stops when T < initial_temperature * final_temperature_ratio.
    double final_temperature_ratio = 1e-4;
    int moves_per_temperature = 30;
    int temperature_samples = 100;
    double max_step = 0.5;
    double min_step = 0.02;
};

struct AnnealResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    double initial_temperature = 0.0;
    int evaluations = 0;
};

/// Metropolis simulated annealing with geometric cooling. The initial
/// temperature is the standard deviation of f over `temperature_samples`
/// points drawn by `sample`. Gaussian proposals perturb every coordinate with
/// a step that shrinks as sqrt(T / T0).
template <typename F, typename Sampler, typename Rng>
AnnealResult anneal(F &&f, Sampler &&sample, Rng &rng, const AnnealOptions &opt = {}) {
    AnnealResult out;
    std::vector<double> current;
    double current_value = std::numeric_limits<double>::infinity();
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < opt.temperature_samples; ++i) {
        std::vector<double> x = sample(rng);
        const double v = f(x);
        ++out.evaluations;
        sum += v;
        sum2 += v * v;
        if (v < current_value) {
            current_value = v;
            current = std::move(x);
        }
    }
    const double m = sum / opt.temperature_samples;
    const double var = std::max(0.0, sum2 / opt.temperature_samples - m * m);
    const double t0 = std::sqrt(var) > 0.0 ? std::sqrt(var) : 1e-12;
    out.initial_temperature = t0;
    out.x = current;
    out.value = current_value;

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> proposal(current.size());
    for (double t = t0; t > t0 * opt.final_temperature_ratio; t *= opt.cooling) {
        const double step = std::max(opt.min_step, opt.max_step * std::sqrt(t / t0));
        for (int move = 0; move < opt.moves_per_temperature; ++move) {
            for (std::size_t j = 0; j < current.size(); ++j) {
                proposal[j] = current[j] + step * gauss(rng);
            }
            const double v = f(proposal);
            ++out.evaluations;
            if (v <= current_value || unit(rng) < std::exp((current_value - v) / t)) {
                current.swap(proposal);
                current_value = v;
                if (v < out.value) {
                    out.value = v;
                    out.x = current;
                }
            }
        }
    }
    return out;
}

} // namespace superadd
