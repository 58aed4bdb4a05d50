#include "lwrt/cli/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lwrt::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

struct Parsed {
    std::vector<std::pair<std::string, std::string>> headers;
    std::vector<std::vector<double>> rows;
};

Parsed parse(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    Parsed p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string key = line.substr(1, colon - 1);
            key.erase(0, key.find_first_not_of(' '));
            key.erase(key.find_last_not_of(' ') + 1);
            p.headers.emplace_back(key, line.substr(colon + 1));
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        p.rows.push_back(std::move(row));
    }
    return p;
}

const std::string* header(const Parsed& p, const std::string& key) {
    for (const auto& [k, v] : p.headers)
        if (k == key) return &v;
    return nullptr;
}

UniformAxis axis_header(const Parsed& p, const std::string& key, const std::string& path) {
    const std::string* v = header(p, key);
    if (!v) throw std::runtime_error(path + ": missing '# " + key + ": min max n' header");
    std::stringstream ss(*v);
    UniformAxis a;
    if (!(ss >> a.min >> a.max >> a.n) || a.n < 2 || !(a.max > a.min))
        throw std::runtime_error(path + ": malformed '# " + key + "' header");
    return a;
}

void check_shape(const Parsed& p, int rows, int cols, const std::string& path) {
    if (static_cast<int>(p.rows.size()) != rows)
        throw std::runtime_error(path + ": expected " + std::to_string(rows) + " rows, found " +
                                 std::to_string(p.rows.size()));
    for (std::size_t i = 0; i < p.rows.size(); ++i)
        if (static_cast<int>(p.rows[i].size()) != cols)
            throw std::runtime_error(path + ": row " + std::to_string(i) + " has " + std::to_string(p.rows[i].size()) +
                                     " values, expected " + std::to_string(cols));
}

void write_axis(std::ostream& os, const char* key, const UniformAxis& a) {
    os << "# " << key << ": " << format_double(a.min) << ' ' << format_double(a.max) << ' ' << a.n << '\n';
}

void write_rows(std::ostream& os, const std::vector<double>& values, int rows, int cols) {
    std::string line;
    for (int i = 0; i < rows; ++i) {
        line.clear();
        for (int j = 0; j < cols; ++j) {
            if (j) line += ',';
            line += format_double(values[static_cast<std::size_t>(i) * cols + j]);
        }
        line += '\n';
        os << line;
    }
}

}  // namespace

void write_sinogram_csv(const Sinogram& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    write_axis(os, "xi", g.xi);
    write_axis(os, "eta", g.eta);
    os << "# noise_sigma: " << format_double(g.noise_sigma) << '\n';
    os << "# seed: " << g.seed << '\n';
    write_rows(os, g.values, g.xi.n, g.eta.n);
}

Sinogram read_sinogram_csv(const std::string& path) {
    const Parsed p = parse(path);
    Sinogram g(axis_header(p, "xi", path), axis_header(p, "eta", path));
    check_shape(p, g.xi.n, g.eta.n, path);
    for (int i = 0; i < g.xi.n; ++i)
        for (int j = 0; j < g.eta.n; ++j) g.at(i, j) = p.rows[i][j];
    if (const auto* v = header(p, "noise_sigma")) g.noise_sigma = std::stod(*v);
    if (const auto* v = header(p, "seed")) g.seed = std::stoull(*v);
    g.provenance = path;
    g.validate();
    return g;
}

TabulatedGrid read_table_csv(const std::string& path) {
    const Parsed p = parse(path);
    TabulatedGrid t;
    t.x = axis_header(p, "x", path);
    t.y = axis_header(p, "y", path);
    check_shape(p, t.x.n, t.y.n, path);
    t.values.reserve(static_cast<std::size_t>(t.x.n) * t.y.n);
    for (const auto& row : p.rows) t.values.insert(t.values.end(), row.begin(), row.end());
    return t;
}

void write_table_csv(const TabulatedGrid& t, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    write_axis(os, "x", t.x);
    write_axis(os, "y", t.y);
    write_rows(os, t.values, t.x.n, t.y.n);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), columns_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += columns[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch in " + path_);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += format_double(values[i]);
    }
    buffer_ += '\n';
}

void flush(CsvWriter& w) {
    std::ofstream os(w.path_, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + w.path_ + "'");
    os << w.buffer_;
}

CsvWriter::~CsvWriter() {
    try {
        flush(*this);
    } catch (...) {
    }
}

}  // namespace lwrt::cli
