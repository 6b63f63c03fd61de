#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gpquad {

/// Formats a double with 12 significant digits, plain decimal point, no
/// grouping. All CSV output goes through this so repeated runs are
/// byte-identical.
std::string format_number(double value);

/// Minimal CSV emitter: one header row, comma separators, '\n' endings.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);

    static std::string cell(double value) { return format_number(value); }
    static std::string cell(int value) { return std::to_string(value); }
    static std::string cell(std::string value) { return value; }

private:
    std::ostream& out_;
};

} // namespace gpquad
