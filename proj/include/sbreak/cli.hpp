#pragma once

#include <string>

namespace sbreak::cli {

// Entry point for the sbreak tool; returns the process exit code.
int run(int argc, const char* const* argv);

// SBREAK_CACHE_DIR, or ./sbreak-cache when unset.
std::string default_cache_dir();

} // namespace sbreak::cli
