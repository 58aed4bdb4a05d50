#pragma once

#include <string>
#include <vector>

#include "lwrt/phantoms.hpp"
#include "lwrt/transform.hpp"

namespace lwrt::cli {

// Header lines `# xi: min max n`, `# eta: min max n`, `# noise_sigma: v`, `# seed: s`,
// then one row per xi node of comma-separated values (17 significant digits).
void write_sinogram_csv(const Sinogram& g, const std::string& path);
Sinogram read_sinogram_csv(const std::string& path);

// Same layout with `# x:` and `# y:` headers; rows are x nodes.
TabulatedGrid read_table_csv(const std::string& path);
void write_table_csv(const TabulatedGrid& t, const std::string& path);

// Plain CSV with a header row; numbers printed with 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::size_t columns_;
    std::string buffer_;
    friend void flush(CsvWriter&);

public:
    ~CsvWriter();
};

std::string format_double(double v);

}  // namespace lwrt::cli
