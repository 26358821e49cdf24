#pragma once

#include <string>

#include "attocell/config.hpp"

// Orchestration of the four command-line experiments and their CSV reports.
// Everything here is deterministic for a fixed configuration: fixed column
// and row order, fixed number formatting, and engines whose results are
// worker-count invariant — so identical (config, seed) runs produce
// byte-identical files.

namespace attocell {

struct RunResult {
    // 0 success; 1 configuration error; 2 a numeric result was not certified
    // to the requested tolerance; 3 a validation comparison failed.
    int exit_code = 0;
    std::string csv;      // complete file body: header row + data rows, LF endings
    std::string message;  // one-line summary for the terminal
};

// Coverage probability versus SINR threshold, per configured location, with
// rows for each requested engine. Columns:
//   location_name,y1,y2,threshold,engine,value,ci_halfwidth,K,eta
// (y1/y2 are empty for the typical-user average; ci_halfwidth holds the
// binomial halfwidth for mc rows and the certified numeric bound for
// analytic rows.)
RunResult run_coverage(const ExperimentConfig& config);

// Rate coverage versus rate target (same schema, thresholds in bits/s).
// When the Monte Carlo engine runs, appends per-location empirical
// median-rate rows (engine "mc_median", threshold column 0.5 for the
// quantile), and when K > 0 also the relative drop of the median against a
// K = 0 run of the same seed (engine "mc_median_drop").
RunResult run_rate(const ExperimentConfig& config);

// Identity and cross-engine validation. Columns:
//   check,name,threshold,left,right,delta,tolerance,status
// Rows: the three coverage-equivalence identities at the configured
// corollary thresholds (left/right = the two sides); analytic-vs-MC coverage
// deltas at 0/3/6/9 dB for each fixed configured location; and a typical-user
// envelope check (Monte Carlo typical value against the min/max of the fixed
// locations) at the same thresholds. Exit 3 when any row fails.
RunResult run_validate(const ExperimentConfig& config);

// Interference-distribution comparison at each fixed configured location:
// the Fourier-inverted P[I < s] against the empirical CDF at ten s values
// log-spaced across [median/2, 2*median] of the sampled interference.
// Columns:
//   location_name,y1,y2,s,analytic,analytic_unc,mc,mc_ci,delta,tolerance,status
RunResult run_interference(const ExperimentConfig& config);

// Writes content to path atomically: a temp file in the same directory,
// flushed, then renamed over the target. Throws std::runtime_error on I/O
// failure.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace attocell
