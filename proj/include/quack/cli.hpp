#pragma once

#include <string>
#include <vector>

namespace quack {

/// CLI entry point (subcommands: run, plot, graph, check). Exit codes:
/// 0 success, 1 invariant violation, 2 usage or config error.
int cli_main(const std::vector<std::string>& args);

}  // namespace quack
