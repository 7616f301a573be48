#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace simdeck {

/// Command line entry point. args excludes the program name.
///   host <demo> [dbfile] [--port N] [--address A] [--web-root DIR]
///        [--headless --steps K [--png-dir DIR]]
///   list-demos
///   parse <file> [--db path] [--overwrite]
/// Exit codes: 0 success, 1 runtime error, 2 usage error or unknown demo.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace simdeck
