#pragma once

namespace eaqga {

/// Entry point behind the `eaqga` binary. Subcommands: ingest, synth,
/// solve, oracle, bench, version. Returns 0 on success, 1 on usage
/// errors, 2 on data errors.
int cli_main(int argc, const char* const* argv);

}  // namespace eaqga
