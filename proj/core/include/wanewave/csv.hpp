#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wanewave {

/// CSV writer with '#'-prefixed header comments; column order is fixed by the
/// caller and documented in FORMATS.md.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& line);
    void columns(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);

    static std::string num(double v, int precision = 12);

private:
    std::ostream& out_;
};

} // namespace wanewave
