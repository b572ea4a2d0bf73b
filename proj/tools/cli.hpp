#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vibrotag::cli {

/// Runs one command line (args excludes the program name) and returns the
/// process exit status: 0 on success, 1 when any item failed, 2 on usage
/// errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

/// Shortest text that parses back to exactly v.
std::string format_number(double v);

}  // namespace vibrotag::cli
