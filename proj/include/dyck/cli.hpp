#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dyck {

/// Entry point behind the `dyckreach` binary. Exit codes:
///   0 success / query true / accept
///   1 query false / reject
///   2 input or format error
///   3 algorithm/mode mismatch
///   4 stale summary
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace dyck
