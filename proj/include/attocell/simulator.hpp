#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "attocell/analytic.hpp"
#include "attocell/channel.hpp"
#include "attocell/geometry.hpp"

// Monte Carlo engine: samples explicit transmitter configurations (the room's
// own luminaires plus their wall-reflection images up to a cutoff order),
// evaluates the exact SINR at a receiver against each sampled configuration,
// and turns trial outcomes into coverage / interference-distribution / rate
// estimates with binomial confidence intervals.
//
// This engine shares only the scenario-parameter and channel-constant types
// with the transform-based evaluator; every probability it reports comes from
// counting sampled networks, so the two routes can be compared as independent
// witnesses of the same model.
//
// Determinism contract: every estimator's output is a pure function of its
// arguments. Each trial derives its own generator from (base_seed, trial
// index), and per-block tallies are reduced in index order, so results are
// bit-identical for any worker count (see ATTOCELL_THREADS) and across runs.

namespace attocell {

// How reflection images are attached to a sampled configuration.
//  - INDEPENDENT: each image ring receives a fresh Poisson point set on its
//    own cells, matching the thinning-free independence approximation used by
//    the transform route. This is the mode cross-validated against it.
//  - MIRRORED: image points are the deterministic wall reflections of the
//    room's own points (one image per lattice cell of the ring), i.e. the
//    physically exact mirror construction. Reported as a deviation diagnostic;
//    not expected to match the analytic route once reflections matter.
enum class SampleMode { INDEPENDENT, MIRRORED };

struct TransmitterSample {
    Vec2 position;  // room-plane coordinates (metres)
    int order = 0;  // number of wall bounces for this (possibly virtual) source
};

// One sampled network: all transmitters (real and image) with their bounce
// orders, plus the seed that produced them.
struct NetworkRealization {
    std::vector<TransmitterSample> transmitters;
    std::uint64_t seed = 0;
};

// One Monte Carlo probability estimate: a trial fraction with its 95%
// normal-approximation half width 1.96 * sqrt(p(1-p)/trials).
struct McEstimate {
    double value = 0.0;
    double ci_halfwidth = 0.0;
    long trials = 0;
};

// SINR evaluated against one realization. serving indexes the transmitter of
// maximal received power in `transmitters` (-1 when the network is empty, in
// which case sinr is 0).
struct SinrSample {
    double sinr = 0.0;
    int serving = -1;
};

// Draw one network. Order-0 points: Poisson(density * room area) count,
// uniform on the room. Rings 1..max_order are attached according to `mode`.
// Deterministic in `seed`. Throws std::invalid_argument for invalid
// parameters or max_order < 0.
NetworkRealization sample_network(const NetworkParams& params, int max_order, SampleMode mode,
                                  std::uint64_t seed);

// Exact SINR at `receiver`: each transmitter contributes received power
// eta^order * (|pos - receiver|^2 + h^2)^(-beta); the serving transmitter is
// the strongest one and the rest plus noise form the denominator. The serving
// choice is invariant under common scaling of all powers; ties resolve to the
// lowest index.
SinrSample evaluate_sinr(const NetworkRealization& realization, Vec2 receiver,
                         const ChannelConstants& consts, double eta);

// Fraction of trials with SINR > tau, per grid point. `receiver` = nullopt
// draws a fresh uniform room location each trial (the "typical user" view).
// Unlike the transform route, thresholds below 1 are meaningful here; the grid
// must be positive. Deterministic in base_seed regardless of worker count.
CoverageCurve estimate_coverage(const NetworkParams& params, std::optional<Vec2> receiver,
                                const std::vector<double>& tau_grid, int max_order,
                                SampleMode mode, long trials, std::uint64_t base_seed);

// Empirical P[I < s] of the aggregate interference-style sum over ALL sampled
// transmitters (no serving exclusion), one estimate per grid value.
std::vector<McEstimate> estimate_interference_cdf(const NetworkParams& params, Vec2 receiver,
                                                  const std::vector<double>& s_grid,
                                                  int max_order, SampleMode mode, long trials,
                                                  std::uint64_t base_seed);

// Fraction of trials whose Shannon-style rate zeta1 * (W/n) * log2(1 + zeta2 *
// SINR) exceeds each grid value, with n the mean load. Grid values must be
// >= 0 (0 counts the trials with a nonzero rate, i.e. nonempty networks).
CoverageCurve estimate_rate_coverage(const NetworkParams& params, std::optional<Vec2> receiver,
                                     const std::vector<double>& rho_grid, int max_order,
                                     SampleMode mode, long trials, std::uint64_t base_seed);

// Raw per-trial SINR samples, one per trial in trial order; trial t uses the
// same stream the estimators use, so sample_sinr(...)[t] is exactly the SINR
// that estimate_coverage's trial t thresholded. For empirical quantiles.
std::vector<double> sample_sinr(const NetworkParams& params, std::optional<Vec2> receiver,
                                int max_order, SampleMode mode, long trials,
                                std::uint64_t base_seed);

// Raw per-trial aggregate interference samples, in trial order.
std::vector<double> sample_interference(const NetworkParams& params, Vec2 receiver,
                                        int max_order, SampleMode mode, long trials,
                                        std::uint64_t base_seed);

}  // namespace attocell
