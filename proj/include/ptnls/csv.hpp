#pragma once

#include "ptnls/criteria.hpp"
#include "ptnls/functionals.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ptnls {

/// Headered, comma-separated table. Cells are kept as text; numbers are
/// written in scientific notation with 15 significant digits.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const; // throws IoError if absent
    double number(std::size_t row, std::size_t col) const;
};

std::string format_number(double v);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

CsvTable numeric_table(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

inline const std::vector<std::string>& trace_columns() {
    static const std::vector<std::string> cols = {"t",  "S0", "S1", "S2",     "S3",     "E",
                                                  "X",  "Y",  "peakU2", "peakV2", "originU",
                                                  "originV"};
    return cols;
}

CsvTable trace_table(const std::vector<DiagnosticsSample>& trace);
void write_trace(const std::filesystem::path& path, const std::vector<DiagnosticsSample>& trace);
/// Reads the columns written by write_trace back into samples.
std::vector<DiagnosticsSample> load_trace(const std::filesystem::path& path);

} // namespace ptnls
