#include "ptnls/csv.hpp"

#include "ptnls/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ptnls {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14e", v);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw Error(ErrorKind::IoError, "missing CSV column '" + name + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    const std::string& cell = rows.at(row).at(col);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size())
        throw Error(ErrorKind::IoError, "non-numeric CSV cell '" + cell + "'");
    return v;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw Error(ErrorKind::IoError, "ragged CSV row for " + path.string());
        emit(row);
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::IoError, "empty CSV " + path.string());
    table.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != table.header.size())
            throw Error(ErrorKind::IoError, "ragged CSV row in " + path.string());
        table.rows.push_back(std::move(cells));
    }
    return table;
}

CsvTable numeric_table(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
    CsvTable t;
    t.header = header;
    t.rows.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double v : row) cells.push_back(format_number(v));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

CsvTable trace_table(const std::vector<DiagnosticsSample>& trace) {
    std::vector<std::vector<double>> rows;
    rows.reserve(trace.size());
    for (const DiagnosticsSample& s : trace)
        rows.push_back({s.t, s.stokes.s0, s.stokes.s1, s.stokes.s2, s.stokes.s3, s.energy, s.msw,
                        s.mswRate, s.peakU2, s.peakV2, s.originU, s.originV});
    return numeric_table(trace_columns(), rows);
}

void write_trace(const std::filesystem::path& path, const std::vector<DiagnosticsSample>& trace) {
    write_csv(path, trace_table(trace));
}

std::vector<DiagnosticsSample> load_trace(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    std::vector<std::size_t> col;
    for (const std::string& name : trace_columns()) col.push_back(table.column(name));
    std::vector<DiagnosticsSample> trace;
    trace.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        DiagnosticsSample s;
        s.t = table.number(r, col[0]);
        s.stokes = {table.number(r, col[1]), table.number(r, col[2]), table.number(r, col[3]),
                    table.number(r, col[4])};
        s.energy = table.number(r, col[5]);
        s.msw = table.number(r, col[6]);
        s.mswRate = table.number(r, col[7]);
        s.peakU2 = table.number(r, col[8]);
        s.peakV2 = table.number(r, col[9]);
        s.originU = table.number(r, col[10]);
        s.originV = table.number(r, col[11]);
        trace.push_back(s);
    }
    return trace;
}

} // namespace ptnls
