#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "causalgen/errors.hpp"
#include "causalgen/variable_set.hpp"

namespace causalgen {

// Shortest decimal representation that round-trips the exact double.
// Used for every file we write so that repeated runs are byte-identical.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// Column-major table of continuous values with named attributes.
struct Dataset {
    std::vector<std::string> attributes;
    std::vector<std::vector<double>> columns;

    std::size_t n_cols() const { return columns.size(); }
    std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }

    const std::vector<double>& col(std::size_t j) const {
        if (j >= columns.size()) throw IndexError("column index out of range");
        return columns[j];
    }

    void validate() const {
        if (attributes.size() != columns.size())
            throw ValidationError("attribute/column count mismatch");
        if (columns.empty() || columns.front().empty())
            throw ValidationError("dataset must have at least one row and one column");
        std::set<std::string> names(attributes.begin(), attributes.end());
        if (names.size() != attributes.size())
            throw ValidationError("attribute names are not unique");
        const std::size_t n = columns.front().size();
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != n)
                throw ValidationError("column '" + attributes[j] + "' has inconsistent length");
            for (double v : columns[j])
                if (!std::isfinite(v))
                    throw ValidationError("column '" + attributes[j] + "' contains NaN/Inf");
        }
    }

    // restriction to a variable subset, keeping index order
    Dataset select(const VariableSet& vars) const {
        Dataset out;
        for (int j : vars.indices) {
            if (j < 0 || static_cast<std::size_t>(j) >= n_cols())
                throw IndexError("variable index out of range");
            out.attributes.push_back(attributes[j]);
            out.columns.push_back(columns[j]);
        }
        return out;
    }

    static Dataset from_csv(std::istream& in);
    static Dataset from_csv_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw IoError("cannot open file: " + path);
        return from_csv(f);
    }

    void to_csv(std::ostream& out) const;
    void to_csv_file(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw IoError("cannot open file for writing: " + path);
        to_csv(f);
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_strict_double(const std::string& tok, std::size_t line_no) {
    std::string t = tok;
    // trim surrounding blanks
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
    if (t.empty())
        throw CsvFormatError("empty value on line " + std::to_string(line_no));
    const char* begin = t.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + t.size())
        throw CsvFormatError("malformed number '" + tok + "' on line " + std::to_string(line_no));
    if (!std::isfinite(v))
        throw CsvFormatError("non-finite value '" + tok + "' on line " + std::to_string(line_no));
    return v;
}

}  // namespace detail

inline Dataset Dataset::from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw CsvFormatError("empty input");
    Dataset ds;
    ds.attributes = detail::split_csv_line(line);
    for (auto& name : ds.attributes)
        if (name.empty()) throw CsvFormatError("empty attribute name in header");
    ds.columns.assign(ds.attributes.size(), {});
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto toks = detail::split_csv_line(line);
        if (toks.size() != ds.attributes.size())
            throw CsvFormatError("expected " + std::to_string(ds.attributes.size()) +
                                 " fields, got " + std::to_string(toks.size()) + " on line " +
                                 std::to_string(line_no));
        for (std::size_t j = 0; j < toks.size(); ++j)
            ds.columns[j].push_back(detail::parse_strict_double(toks[j], line_no));
    }
    ds.validate();
    return ds;
}

inline void Dataset::to_csv(std::ostream& out) const {
    for (std::size_t j = 0; j < attributes.size(); ++j) {
        if (j) out << ',';
        out << attributes[j];
    }
    out << '\n';
    const std::size_t n = n_rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) out << ',';
            out << format_double(columns[j][i]);
        }
        out << '\n';
    }
}

}  // namespace causalgen
