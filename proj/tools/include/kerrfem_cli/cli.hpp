#pragma once

#include <iosfwd>

namespace kerrfem::cli {

/// Entry point of the `kerrfem` tool. Returns 0 on success, 1 on a
/// numerical or I/O failure, 2 on a usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kerrfem::cli
