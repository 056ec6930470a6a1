#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fqm {

// Runs one subcommand. JSON goes to `out` (or the --out file), a short human
// summary to `err`. Exit codes: 0 ok, 2 validation, 3 I/O, 4 size bound,
// 5 computation/hypothesis failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fqm
