// Command-line front end. Subcommands:
//   point      single capacity / rate value
//   sweep      columns over an angle grid, written as CSV
//   crossover  angle where a two-shot rate meets C1
//   mc         Monte Carlo check of the analytic two-shot rate
//
// Exit codes: 0 success, 2 argument error, 3 numerical or bracketing
// failure, 4 IO failure. Angles are in degrees at this boundary.

#pragma once

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "superadd/capacities.hpp"
#include "superadd/coherent.hpp"
#include "superadd/mcsim.hpp"
#include "superadd/parallel.hpp"
#include "superadd/sweep_table.hpp"
#include "superadd/twoshot.hpp"
#include "superadd/version.hpp"

namespace superadd::cli {

enum ExitCode : int { kOk = 0, kArgumentError = 2, kNumericalError = 3, kIoError = 4 };

inline std::string format_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%#.11g", v);
    return buf;
}

inline const std::vector<std::string> &point_quantities() {
    static const std::vector<std::string> q{"c1", "cinf", "r2", "r2gen", "r2trunc"};
    return q;
}

inline const std::vector<std::string> &sweep_columns() {
    static const std::vector<std::string> q{"c1", "cinf", "ratio", "r2", "diff", "r2trunc", "r2trunc_reuse", "r2gen"};
    return q;
}

inline void print_result(const RateResult &r, std::ostream &out) {
    out << format_value(r.bits_per_transmission) << '\n';
    out << "label = " << r.label << '\n';
    for (const auto &[name, value] : r.params) {
        out << name << " = " << format_value(value) << '\n';
    }
    out << "iterations = " << r.iterations << '\n';
    out << "converged = " << (r.converged ? "true" : "false") << '\n';
}

inline int cmd_point(double gamma_deg, const std::string &which, std::uint64_t seed, std::ostream &out,
                     std::ostream &err) {
    const bool closed_form = which == "c1" || which == "cinf";
    if (closed_form ? !(gamma_deg >= 0.0 && gamma_deg <= 90.0) : !(gamma_deg > 0.0 && gamma_deg < 90.0)) {
        err << "point: --gamma " << gamma_deg << " out of range for '" << which << "' ("
            << (closed_form ? "[0, 90]" : "(0, 90)") << ")\n";
        return kArgumentError;
    }
    const Angle g = Angle::degrees(gamma_deg);
    if (which == "c1") {
        out << format_value(c1(g)) << '\n';
    } else if (which == "cinf") {
        out << format_value(c_infinity(g)) << '\n';
    } else if (which == "r2") {
        print_result(optimize_r2(g), out);
    } else if (which == "r2gen") {
        print_result(optimize_general(g, seed), out);
    } else if (which == "r2trunc") {
        print_result(optimize_r2_truncated(g), out);
    } else {
        err << "point: unknown quantity '" << which << "'\n";
        return kArgumentError;
    }
    return kOk;
}

/// Evaluates the requested columns on `steps` evenly spaced angles.
inline SweepTable build_sweep(double from_deg, double to_deg, int steps, const std::vector<std::string> &columns,
                              std::uint64_t seed) {
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        grid[static_cast<std::size_t>(i)] =
            i == steps - 1 ? to_deg : from_deg + (to_deg - from_deg) * i / (steps - 1);
    }
    auto has = [&](const char *name) { return std::find(columns.begin(), columns.end(), name) != columns.end(); };
    const bool need_r2 = has("r2") || has("diff");

    using Row = std::map<std::string, double>;
    const auto rows = parallel_map(grid.size(), [&](std::size_t i) {
        const Angle g = Angle::degrees(grid[i]);
        Row row;
        row["c1"] = c1(g);
        row["cinf"] = c_infinity(g);
        row["ratio"] = row["cinf"] / row["c1"];
        if (need_r2) {
            row["r2"] = optimize_r2(g).bits_per_transmission;
            row["diff"] = row["r2"] - row["c1"];
        }
        if (has("r2trunc")) {
            row["r2trunc"] = optimize_r2_truncated(g).bits_per_transmission;
        }
        if (has("r2trunc_reuse")) {
            row["r2trunc_reuse"] = optimize_r2_truncated_reused_eta(g).bits_per_transmission;
        }
        if (has("r2gen")) {
            row["r2gen"] = optimize_general(g, seed).bits_per_transmission;
        }
        return row;
    });

    SweepTable table(grid);
    for (const auto &name : columns) {
        std::vector<double> values;
        for (const auto &row : rows) {
            values.push_back(row.at(name));
        }
        table.add_column(name, std::move(values));
    }
    std::ostringstream prov;
    prov << "superadd " << kVersion << " sweep grid=[" << SweepTable::format_real(from_deg) << ","
         << SweepTable::format_real(to_deg) << "] steps=" << steps << " seed=" << seed
         << " eta_points=200 band_points=200 p_points=101 nm_ftol=1e-10 restarts=20 cooling=0.97";
    table.add_provenance(prov.str());
    return table;
}

inline int cmd_sweep(double from_deg, double to_deg, int steps, const std::vector<std::string> &columns,
                     const std::string &path, std::uint64_t seed, std::ostream &out, std::ostream &err) {
    if (!(from_deg > 0.0 && from_deg < to_deg && to_deg < 90.0)) {
        err << "sweep: need 0 < --from < --to < 90\n";
        return kArgumentError;
    }
    if (steps < 2) {
        err << "sweep: --steps must be at least 2\n";
        return kArgumentError;
    }
    if (columns.empty()) {
        err << "sweep: no columns requested\n";
        return kArgumentError;
    }
    for (const auto &c : columns) {
        if (std::find(sweep_columns().begin(), sweep_columns().end(), c) == sweep_columns().end()) {
            err << "sweep: unknown column '" << c << "'\n";
            return kArgumentError;
        }
    }
    const SweepTable table = build_sweep(from_deg, to_deg, steps, columns, seed);
    if (path == "-") {
        table.write_csv(out);
        return kOk;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "sweep: cannot open '" << path << "' for writing\n";
        return kIoError;
    }
    table.write_csv(file);
    file.flush();
    if (!file) {
        err << "sweep: write to '" << path << "' failed\n";
        return kIoError;
    }
    return kOk;
}

inline Angle ansatz_crossover() {
    return crossover_angle([](Angle g) { return optimize_r2(g).bits_per_transmission; }, Angle::degrees(15.0),
                           Angle::degrees(25.0));
}

inline Angle truncated_crossover() {
    return crossover_angle([](Angle g) { return optimize_r2_truncated(g).bits_per_transmission; },
                           Angle::degrees(14.0), Angle::degrees(20.0));
}

inline int cmd_crossover(const std::string &which, std::ostream &out, std::ostream &err) {
    try {
        Angle x;
        if (which == "ansatz") {
            x = ansatz_crossover();
        } else if (which == "truncated") {
            x = truncated_crossover();
        } else {
            err << "crossover: unknown curve '" << which << "'\n";
            return kArgumentError;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", x.deg());
        out << buf << '\n';
        return kOk;
    } catch (const BracketingError &e) {
        err << e.what() << '\n';
        return kNumericalError;
    }
}

inline int cmd_mc(double gamma_deg, std::int64_t samples, std::uint64_t seed, std::ostream &out, std::ostream &err) {
    if (!(gamma_deg > 0.0 && gamma_deg < 90.0)) {
        err << "mc: --gamma must lie in (0, 90)\n";
        return kArgumentError;
    }
    if (samples < 1) {
        err << "mc: --samples must be at least 1\n";
        return kArgumentError;
    }
    const MonteCarloReport r = validate_ansatz(Angle::degrees(gamma_deg), static_cast<std::uint64_t>(samples), seed);
    const bool pass = r.consistent(3.0);
    out << "eta = " << format_value(r.eta) << '\n'
        << "p = " << format_value(r.p) << '\n'
        << "analytic_rate = " << format_value(r.analytic_rate) << '\n'
        << "empirical_rate = " << format_value(r.empirical_rate) << '\n'
        << "standard_error = " << format_value(r.standard_error) << '\n'
        << "result = " << (pass ? "PASS" : "FAIL") << " (3 sigma)\n";
    return pass ? kOk : kNumericalError;
}

inline std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

/// Parses argv and dispatches. All output goes to `out` / `err`.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Two-shot superadditivity rates for a binary pure-state alphabet", "superadd"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::uint64_t seed = 1;

    double point_gamma = 0.0;
    std::string point_which;
    auto *point = app.add_subcommand("point", "Print one capacity or optimized rate");
    point->add_option("--gamma", point_gamma, "Overlap angle in degrees")->required();
    point->add_option("--which", point_which, "c1 | cinf | r2 | r2gen | r2trunc")
        ->required()
        ->check(CLI::IsMember(point_quantities()));
    point->add_option("--seed", seed, "Seed for r2gen");

    double from_deg = 0.0, to_deg = 0.0;
    int steps = 0;
    std::string columns = "c1,cinf,ratio";
    std::string path = "-";
    auto *sweep = app.add_subcommand("sweep", "Write columns over an angle grid as CSV");
    sweep->add_option("--from", from_deg, "First angle in degrees")->required();
    sweep->add_option("--to", to_deg, "Last angle in degrees")->required();
    sweep->add_option("--steps", steps, "Number of grid points")->required();
    sweep->add_option("--columns", columns, "Comma list of c1,cinf,ratio,r2,diff,r2trunc,r2trunc_reuse,r2gen");
    sweep->add_option("--out", path, "Output path, - for stdout");
    sweep->add_option("--seed", seed, "Seed for r2gen");

    std::string cross_which;
    auto *cross = app.add_subcommand("crossover", "Angle where a two-shot rate meets C1");
    cross->add_option("--which", cross_which, "ansatz | truncated")
        ->required()
        ->check(CLI::IsMember({"ansatz", "truncated"}));

    double mc_gamma = 0.0;
    std::int64_t mc_samples = 1000000;
    auto *mc = app.add_subcommand("mc", "Monte Carlo check of the optimal two-shot rate");
    mc->add_option("--gamma", mc_gamma, "Overlap angle in degrees")->required();
    mc->add_option("--samples", mc_samples, "Number of simulated transmission pairs");
    mc->add_option("--seed", seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << (e.get_name() == "CallForVersion" ? std::string(kVersion) + "\n" : app.help());
            return kOk;
        }
        err << e.what() << '\n';
        return kArgumentError;
    }

    try {
        if (*point) {
            return cmd_point(point_gamma, point_which, seed, out, err);
        }
        if (*sweep) {
            return cmd_sweep(from_deg, to_deg, steps, split_list(columns), path, seed, out, err);
        }
        if (*cross) {
            return cmd_crossover(cross_which, out, err);
        }
        if (*mc) {
            return cmd_mc(mc_gamma, mc_samples, seed, out, err);
        }
    } catch (const DomainError &e) {
        err << e.what() << '\n';
        return kArgumentError;
    } catch (const std::exception &e) {
        err << e.what() << '\n';
        return kNumericalError;
    }
    return kArgumentError;
}

} // namespace superadd::cli
