#ifndef SENTI_CLI_COMMANDS_H_
#define SENTI_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace senti::cli {

// Exit codes: 0 success, 1 runtime failure, 2 usage error, invalid config
// or missing input file.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point shared by the `senti` binary and the tests. `args` excludes
// the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace senti::cli

#endif  // SENTI_CLI_COMMANDS_H_
