#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace affgrass::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomainError = 2,
  kUnsatisfiedBound = 3,
};

/// Default precision when neither -p nor AFFGRASS_PRECISION is given.
constexpr int kDefaultPrecision = 20;
constexpr const char* kPrecisionEnv = "AFFGRASS_PRECISION";

/// Subcommands: metric, fit-plane, intersect, net, dim, experiment.
/// args[0] is the program name. Structured results go to out as one JSON
/// document per line; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace affgrass::cli
