#pragma once

#include <string>
#include <vector>

#include "msqg/evolve.hpp"
#include "msqg/metrics.hpp"

#include "config.hpp"

namespace msqg::cli {

// One row per diagnostics record:
// t,h3,c2,delta_inv,F,triple,area_1..area_N,min_gap,arclen_1..arclen_N
// with %.17g formatting ("inf" for the single-patch gap), so repeated runs of
// the same configuration produce byte-identical files.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records, int n_patches);

std::string tracers_csv(const std::vector<TracerPath>& paths);

std::string convergence_csv(const ConvergenceTable& table);
std::string convergence_json(const ConvergenceTable& table);

std::string summary_json(const std::string& command, const RunConfig& config,
                         const RunResult& result, int snapshots_written, int exit_code);

// Filled frames of every patch (positive strength warm, negative cool) over a
// viewBox fixed from the whole trajectory, y axis pointing up; the half-plane
// axis is drawn as a line.
std::string frame_svg(const ContourState& state, const PatchFamily& family,
                      const std::vector<ContourState>& trajectory);

void write_file(const std::string& path, const std::string& content);

} // namespace msqg::cli
