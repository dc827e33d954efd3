#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sqrtlasso/core.hpp"

namespace sqrtlasso {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::vector<std::string> header;
    Matrix values;  // one row per data line
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace detail

// Reads a comma-separated file with a header row. Every data field must be a
// finite number with '.' as the decimal separator; empty or non-numeric
// fields (missing values) are an error.
inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw CsvError(path + ": empty file");
    CsvTable table;
    table.header = detail::split_line(line);
    if (table.header.empty()) throw CsvError(path + ": empty header");

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_line(line);
        if (fields.size() != table.header.size())
            throw CsvError(path + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(table.header.size()) + " fields, got " +
                           std::to_string(fields.size()));
        std::vector<double> row(fields.size());
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (fields[k].empty())
                throw CsvError(path + ":" + std::to_string(line_no) + ": missing value in column '" +
                               table.header[k] + "'");
            char* end = nullptr;
            const double v = std::strtod(fields[k].c_str(), &end);
            if (end == fields[k].c_str() || *end != '\0' || !std::isfinite(v))
                throw CsvError(path + ":" + std::to_string(line_no) + ": non-numeric value '" +
                               fields[k] + "' in column '" + table.header[k] + "'");
            row[k] = v;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvError(path + ": no data rows");
    table.values = Matrix(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(table.header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                rows[i][k];
    return table;
}

struct CsvDataset {
    Dataset data;
    std::string response;
    std::vector<std::string> feature_names;
};

// Splits a table into the designated response column and the remaining
// columns, which form the raw design (normalized inside Dataset).
inline CsvDataset dataset_from_csv(const CsvTable& table, const std::string& response_column) {
    Eigen::Index response_idx = -1;
    for (std::size_t k = 0; k < table.header.size(); ++k)
        if (table.header[k] == response_column)
            response_idx = static_cast<Eigen::Index>(k);
    if (response_idx < 0)
        throw CsvError("response column '" + response_column + "' not found");
    if (table.header.size() < 2)
        throw CsvError("need at least one feature column besides the response");

    const Eigen::Index n = table.values.rows();
    const Eigen::Index p = static_cast<Eigen::Index>(table.header.size()) - 1;
    Vector y = table.values.col(response_idx);
    Matrix x(n, p);
    std::vector<std::string> names;
    Eigen::Index col = 0;
    for (std::size_t k = 0; k < table.header.size(); ++k) {
        if (static_cast<Eigen::Index>(k) == response_idx) continue;
        x.col(col++) = table.values.col(static_cast<Eigen::Index>(k));
        names.push_back(table.header[k]);
    }
    return CsvDataset{Dataset(std::move(y), x), response_column, std::move(names)};
}

}  // namespace sqrtlasso
