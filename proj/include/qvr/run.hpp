#ifndef QVR_RUN_HPP
#define QVR_RUN_HPP

#include "qvr/config.hpp"
#include "qvr/squeezing.hpp"
#include "qvr/table.hpp"

namespace qvr {

/// Evaluates the configured task once and assembles the result table
/// (deterministic rows; provenance in the header).
ResultTable run_task(const RunConfig& rc);

/// Cartesian sweep of the task's scalar observable over the configured axes.
/// Per-point failures become NaN rows with the error recorded; rows already
/// present in `existing` (matched on axis values) are reused, which makes an
/// interrupted sweep resumable from its partial output file.
ResultTable run_sweep(const RunConfig& rc, const ResultTable* existing = nullptr);

/// Full CLI backend: dispatches run_task/run_sweep and writes the output
/// file(s). Returns the paths written.
std::vector<std::string> run_to_files(const RunConfig& rc);

}  // namespace qvr

#endif
