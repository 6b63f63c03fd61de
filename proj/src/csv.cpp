#include "gpquad/csv.hpp"

#include <cstdio>

namespace gpquad {

std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

void CsvWriter::header(const std::vector<std::string>& names) {
    row(names);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i != 0) {
            out_ << ',';
        }
        out_ << cells[i];
    }
    out_ << '\n';
}

} // namespace gpquad
