#ifndef DSM_CSV_HPP
#define DSM_CSV_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "dsm/errors.hpp"

// CSV output: comma separator, header row, decimal point, 17 significant
// digits so values survive a parse round-trip exactly.

namespace dsm {

/// Shortest-exact-ish decimal rendering of a double (%.17g).
std::string format_full(double value);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void write_row(const std::vector<std::optional<double>>& cells);
    void write_row(const std::vector<double>& cells);

private:
    std::ofstream out_;
};

}  // namespace dsm

#endif  // DSM_CSV_HPP
