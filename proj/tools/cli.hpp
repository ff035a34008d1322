#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace oqe::cli {

inline constexpr const char* kVersion = "0.1.0";

using Cell = std::variant<long long, double, std::string, bool>;

/// One output file: fixed header, then rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 17 significant digits, '.' decimal, no locale.
std::string format_double(double v);

void write_csv(const Table& t, std::ostream& out);

/// Full command line, argv[0] included. Output goes to --out, or to `out` when
/// --out is absent or "-". Errors are one line on `err`:
///   error kind=<Kind> message=<text>
/// Exit status: 0 ok, 1 report with failing criteria, 2 bad configuration, 3 numeric/module failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oqe::cli
