#ifndef SHEAFLAB_CLI_HPP
#define SHEAFLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sheaflab {

/// Runs the sheaflab command line. `args` excludes the program name.
/// Reports go to `out`, diagnostics to `err`. Exit codes: 0 ok/consistent,
/// 1 usage or input error, 2 mathematical inconsistency detected.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace sheaflab

#endif
