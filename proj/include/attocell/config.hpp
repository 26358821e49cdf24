#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "attocell/analytic.hpp"
#include "attocell/channel.hpp"
#include "attocell/geometry.hpp"
#include "attocell/quadrature.hpp"
#include "attocell/simulator.hpp"

// Experiment configuration: a flat, line-oriented `key = value` format with
// `#` comments, designed so every effective setting can be dumped back out and
// reloaded to reproduce a run exactly.
//
// Keys (all optional; omitted keys keep the reference defaults):
//   a, h, lambda, lambda_u, psi_half, a_pd, xi, g_f, g_c   -- scenario numbers
//   ptx, n0bf          -- powers; plain watts, or `30 dBm` style with a suffix
//   w, zeta1, zeta2    -- rate law
//   eta                -- per-bounce wall reflectivity
//   k                  -- highest reflection order (0..4)
//   mode               -- independent | mirrored     (image attachment)
//   engine             -- analytic | mc | both
//   trials, seed       -- Monte Carlo controls
//   rel_tol, abs_tol   -- quadrature targets for the transform route
//   grid_n             -- Gauss grid size for the typical-user average
//   tau_db, tau        -- SINR threshold grid (dB / linear; give at most one)
//   rho                -- rate target grid, bits/s (for the rate command)
//   corollary_taus     -- thresholds for the validate command's identity suite
//   out                -- output CSV path
//   location.<name>    -- `x y` point, or the word `typical` for the averaged
//                         receiver; overrides or extends the default set
//   locations          -- comma list choosing which named locations run
//
// Defaults follow the reference indoor scenario (9 m half side, 3.5 m drop,
// density 0.1, 60-degree semi-angle, 30 dBm transmit power, -117 dBm noise,
// 1 GHz bandwidth) with locations corner, edge, halfway, center, typical.

namespace attocell {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Engine { ANALYTIC, MC, BOTH };

// A receiver position under test; `point` empty means the typical-user
// average (uniformly random receiver) rather than a fixed location.
struct NamedLocation {
    std::string name;
    std::optional<Vec2> point;
};

struct ExperimentConfig {
    NetworkParams params;                  // includes k (max_order) and eta
    std::vector<NamedLocation> locations;  // defaults: corner, edge, halfway, center, typical
    std::optional<std::vector<double>> tau_grid;  // linear; set by tau / tau_db keys
    std::optional<std::vector<double>> rho_grid;  // bits/s; set by the rho key
    std::vector<double> corollary_taus{1.0, 2.0, 5.0};
    Engine engine = Engine::BOTH;
    long trials = 200000;
    std::uint64_t seed = 1;
    SampleMode mode = SampleMode::INDEPENDENT;
    QuadratureSpec quad = default_coverage_spec();  // transform-route tolerances
    int grid_n = 8;
    std::string output_path = "attocell_report.csv";

    // Grid the coverage command runs on: the explicit tau grid, else 0..30 dB.
    std::vector<double> effective_tau_grid() const;
    // Grid the rate command runs on: the explicit rho grid, else 20 log-spaced
    // targets covering 1e7..1e10 bits/s.
    std::vector<double> effective_rho_grid() const;
};

// The reference defaults (equivalent to loading an empty file).
ExperimentConfig default_config();

// Parse configuration text / load it from a file. Unknown keys, malformed
// numbers, misplaced unit suffixes, and constraint violations all raise
// ConfigError naming the offending line. Later duplicates of a key win.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Effective-config dump: a parse_config-compatible rendering of every
// setting, with full-precision numbers, so a dumped config reloads to a
// configuration that reproduces the run exactly.
std::string dump_config(const ExperimentConfig& config);

}  // namespace attocell
