#include "wanewave/csv.hpp"

#include <cmath>
#include <sstream>

namespace wanewave {

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::columns(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) out_ << ",";
        out_ << cells[k];
    }
    out_ << "\n";
}

std::string CsvWriter::num(double v, int precision) {
    std::ostringstream ss;
    ss.precision(precision);
    ss << v;
    return ss.str();
}

} // namespace wanewave
