#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ens::cli {

/// Exit codes shared by every subcommand.
enum Exit : int {
    kSuccess = 0,
    kDomainFailure = 1, ///< infeasible input, bad configuration, failed tolerance
    kInternalError = 2,
};

/// Parses `args` (without the program name) and runs the selected
/// subcommand: reproduce, average, beta, compare or sweep.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ens::cli
