#pragma once

#include <ostream>

#include "qfmin/dense_core.hpp"

namespace qfmin::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,        // parse, IO and argument errors
  kInfeasible = 2,   // Infeasible, InfeasibleOnComplement
  kNotPositive = 3,  // NotPositive, NotPsd and the other definiteness failures
};

int exit_code_for(ErrorKind kind);

/// Entry point of the `qfmin` tool. JSON results go to `out`, human-readable
/// errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfmin::cli
