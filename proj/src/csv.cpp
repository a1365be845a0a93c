#include "dsm/csv.hpp"

#include <cstdio>

namespace dsm {

std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : out_(path) {
    if (!out_) throw IoError("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::write_row(const std::vector<std::optional<double>>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        if (cells[i]) out_ << format_full(*cells[i]);
    }
    out_ << '\n';
    if (!out_) throw IoError("CSV write failed");
}

void CsvWriter::write_row(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_full(cells[i]);
    }
    out_ << '\n';
    if (!out_) throw IoError("CSV write failed");
}

}  // namespace dsm
