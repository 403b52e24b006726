#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "resonator/config.hpp"
#include "resonator/zeta.hpp"

namespace resonator {

// Scan of a rectangle partitioned into (gridRe-1) x (gridIm-1) sub-rectangles
// processed by a worker pool, with JSON-lines checkpointing (one completed
// sub-rectangle per line, config hash embedded). Re-running with a matching
// checkpoint resumes and produces a byte-identical report.
ResonanceReport scan_with_checkpoint(const SchottkyData& s,
                                     const ScanRectangle& rect,
                                     const Twist& twist, double tol,
                                     int workers,
                                     const std::string& checkpointPath,
                                     std::uint64_t configHash);

std::string report_to_json(const ResonanceReport& report);
std::string cover_scan_to_json(const CoverScan& scan);

// CSV of |det| and arg det over the rectangle's corner grid
// (columns re, im, absdet, argdet).
std::string det_grid_csv(const SchottkyData& s, const ScanRectangle& rect,
                         const Twist& twist);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Fast cross-module invariant battery used by the `verify` subcommand.
std::vector<VerifyCheck> run_verify_suite(const SchottkyData& s);

// Dispatches a parsed config to its subcommand. Writes any outputs under
// config.outDir (current directory when empty) and a human-readable summary
// to `out`. Returns the process exit code: 0 success, 1 usage/config error,
// 2 invariant-suite failure.
int run(const RunConfig& config, std::ostream& out);

}  // namespace resonator
