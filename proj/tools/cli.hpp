#pragma once

#include <iosfwd>

namespace spdc::cli {

/// Entry point of `spdc-tuner`; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace spdc::cli
