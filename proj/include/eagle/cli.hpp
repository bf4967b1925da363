#pragma once

namespace eagle {

/// Subcommand front end: ingest, synth, segment, generate, repair,
/// ablate, stats, evaluate, report. Returns 0 on success, 1 on pipeline
/// errors (single-line diagnostic on stderr), 2 on usage errors.
int run_cli(int argc, const char* const* argv);

}  // namespace eagle
