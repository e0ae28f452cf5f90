#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wanewave::cli {

/// Run one subcommand.  args excludes the program name.  Returns 0 on
/// success, 2 on input errors (including usage requests gone wrong), 1 on
/// numerical failures.  All CSV goes to `out` unless --output is given;
/// diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wanewave::cli
