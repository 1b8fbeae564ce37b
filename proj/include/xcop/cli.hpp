#pragma once

namespace xcop {

/// Entry point of the `xcop` tool. Returns 0 on success, 1 on a domain
/// error, 2 on a usage error.
int run_cli(int argc, char** argv);

}  // namespace xcop
