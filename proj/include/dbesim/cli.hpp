#pragma once

namespace dbesim {

/// Subcommands: simulate, compare, explore, fps.
/// Returns 0 on PASS, 1 when violations were found, 2 on usage/config/IO errors.
int cli_main(int argc, char** argv);

}  // namespace dbesim
