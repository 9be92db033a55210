#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "superadd/errors.hpp"

namespace superadd {

/// Columns of reals over a shared, strictly increasing grid of angles in
/// degrees. Serialized as CSV: `#` comment lines (provenance), a header
/// `gamma_deg,<col>,...`, then one row per grid point at 17 significant
/// digits so that parsing reproduces the doubles exactly.
class SweepTable {
public:
    using Column = std::pair<std::string, std::vector<double>>;

    SweepTable() = default;

    explicit SweepTable(std::vector<double> gamma_deg) : gamma_deg_(std::move(gamma_deg)) {
        for (std::size_t i = 1; i < gamma_deg_.size(); ++i) {
            if (!(gamma_deg_[i] > gamma_deg_[i - 1])) {
                throw DomainError("SweepTable: grid must be strictly increasing");
            }
        }
    }

    void add_column(std::string name, std::vector<double> values) {
        if (values.size() != gamma_deg_.size()) {
            throw DomainError("SweepTable: column '" + name + "' has " + std::to_string(values.size()) +
                              " entries, grid has " + std::to_string(gamma_deg_.size()));
        }
        if (name.empty() || name.find_first_of(",\"\n") != std::string::npos || name == "gamma_deg") {
            throw DomainError("SweepTable: invalid column name '" + name + "'");
        }
        if (has_column(name)) {
            throw DomainError("SweepTable: duplicate column '" + name + "'");
        }
        columns_.emplace_back(std::move(name), std::move(values));
    }

    void add_provenance(std::string line) { provenance_.push_back(std::move(line)); }

    std::size_t rows() const { return gamma_deg_.size(); }
    const std::vector<double> &gamma_deg() const { return gamma_deg_; }
    const std::vector<Column> &columns() const { return columns_; }
    const std::vector<std::string> &provenance() const { return provenance_; }

    bool has_column(std::string_view name) const {
        return std::any_of(columns_.begin(), columns_.end(), [&](const Column &c) { return c.first == name; });
    }

    const std::vector<double> &column(std::string_view name) const {
        for (const auto &c : columns_) {
            if (c.first == name) {
                return c.second;
            }
        }
        throw DomainError("SweepTable: no column '" + std::string(name) + "'");
    }

    void write_csv(std::ostream &out) const {
        for (const auto &line : provenance_) {
            out << "# " << line << '\n';
        }
        out << "gamma_deg";
        for (const auto &c : columns_) {
            out << ',' << c.first;
        }
        out << '\n';
        for (std::size_t i = 0; i < rows(); ++i) {
            out << format_real(gamma_deg_[i]);
            for (const auto &c : columns_) {
                out << ',' << format_real(c.second[i]);
            }
            out << '\n';
        }
    }

    static SweepTable read_csv(std::istream &in) {
        std::string line;
        std::vector<std::string> provenance;
        std::vector<std::string> header;
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            if (line.front() == '#') {
                provenance.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
                continue;
            }
            header = split(line);
            break;
        }
        if (header.empty() || header.front() != "gamma_deg") {
            throw DomainError("SweepTable::read_csv: missing gamma_deg header");
        }
        std::vector<std::vector<double>> data(header.size());
        while (std::getline(in, line)) {
            if (line.empty() || line.front() == '#') {
                continue;
            }
            const auto fields = split(line);
            if (fields.size() != header.size()) {
                throw DomainError("SweepTable::read_csv: ragged row");
            }
            for (std::size_t j = 0; j < fields.size(); ++j) {
                data[j].push_back(parse_real(fields[j]));
            }
        }
        SweepTable table(std::move(data[0]));
        for (std::size_t j = 1; j < header.size(); ++j) {
            table.add_column(header[j], std::move(data[j]));
        }
        for (auto &p : provenance) {
            table.add_provenance(std::move(p));
        }
        return table;
    }

    static std::string format_real(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

private:
    static std::vector<std::string> split(const std::string &line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            out.push_back(field);
        }
        return out;
    }

    static double parse_real(const std::string &s) {
        char *end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0') {
            throw DomainError("SweepTable::read_csv: not a number: '" + s + "'");
        }
        return v;
    }

    std::vector<double> gamma_deg_;
    std::vector<Column> columns_;
    std::vector<std::string> provenance_;
};

} // namespace superadd
