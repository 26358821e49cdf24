#include "attocell/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "attocell/parallel.hpp"
#include "attocell/rng.hpp"

namespace attocell {
namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Trials per scheduling block. Per-block tallies are integers and are reduced
// in block-index order, so the estimate is a pure function of (arguments,
// base_seed) no matter how blocks land on workers.
constexpr long kTrialBlock = 256;

// Integer lattice cells (i, j) with |i| + |j| == k — the image squares of
// reflection ring k, each one a translated copy of the room. Enumerated
// ascending in i, then j, so sampling order is deterministic.
struct Cell {
    int i = 0;
    int j = 0;
};

std::vector<Cell> ring_cells(int k) {
    std::vector<Cell> cells;
    if (k == 0) {
        cells.push_back({0, 0});
        return cells;
    }
    cells.reserve(static_cast<std::size_t>(4 * k));
    for (int i = -k; i <= k; ++i) {
        const int j = k - std::abs(i);
        if (j == 0) {
            cells.push_back({i, 0});
            continue;
        }
        cells.push_back({i, -j});
        cells.push_back({i, j});
    }
    return cells;
}

// Wall reflections unfold the room onto the plane: the image of an order-0
// point in lattice cell (i, j) flips parity per axis,
//   x -> 2a i + (-1)^i x,   y -> 2a j + (-1)^j y.
Vec2 mirror_image(Vec2 p, Cell c, double a) {
    const double sx = (c.i % 2 == 0) ? 1.0 : -1.0;
    const double sy = (c.j % 2 == 0) ? 1.0 : -1.0;
    return {2.0 * a * c.i + sx * p.x, 2.0 * a * c.j + sy * p.y};
}

// Draws one network from an already-positioned generator, so callers can put
// other per-trial draws (e.g. a random receiver) ahead of it on the same
// stream. Draw order is fixed: order-0 count, order-0 points, then rings
// ascending (INDEPENDENT draws cell+position per point; MIRRORED draws
// nothing, its images are deterministic functions of the order-0 points).
NetworkRealization sample_stream(const NetworkParams& params, int max_order, SampleMode mode,
                                 Xoshiro256pp& rng, std::uint64_t seed_record) {
    const double a = params.room_half_side;
    const double cell_mean = params.density * 4.0 * a * a;

    NetworkRealization net;
    net.seed = seed_record;

    const long n0 = rng.poisson(cell_mean);
    net.transmitters.reserve(static_cast<std::size_t>(n0));
    for (long p = 0; p < n0; ++p) {
        const double x = rng.uniform(-a, a);
        const double y = rng.uniform(-a, a);
        net.transmitters.push_back({{x, y}, 0});
    }

    if (mode == SampleMode::INDEPENDENT) {
        for (int k = 1; k <= max_order; ++k) {
            const std::vector<Cell> cells = ring_cells(k);
            const double ncells = static_cast<double>(cells.size());
            const long nk = rng.poisson(cell_mean * ncells);
            for (long p = 0; p < nk; ++p) {
                const double pick = rng.uniform01() * ncells;
                const std::size_t c =
                    std::min(static_cast<std::size_t>(pick), cells.size() - 1);
                const double x = rng.uniform(-a, a);
                const double y = rng.uniform(-a, a);
                net.transmitters.push_back(
                    {{2.0 * a * cells[c].i + x, 2.0 * a * cells[c].j + y}, k});
            }
        }
    } else {
        for (int k = 1; k <= max_order; ++k) {
            for (const Cell c : ring_cells(k)) {
                for (long p = 0; p < n0; ++p) {
                    // Index access, not a reference: the push may reallocate.
                    const Vec2 image = mirror_image(net.transmitters[p].position, c, a);
                    net.transmitters.push_back({image, k});
                }
            }
        }
    }
    return net;
}

struct PowerScan {
    double total = 0.0;
    double best = -1.0;
    int best_index = -1;
};

PowerScan scan_powers(const NetworkRealization& net, Vec2 receiver,
                      const ChannelConstants& consts, double eta) {
    PowerScan scan;
    for (std::size_t i = 0; i < net.transmitters.size(); ++i) {
        const TransmitterSample& tx = net.transmitters[i];
        const double pw = pathloss(tx.position, receiver, consts, tx.order, eta);
        scan.total += pw;
        if (pw > scan.best) {
            scan.best = pw;
            scan.best_index = static_cast<int>(i);
        }
    }
    return scan;
}

// Runs `trials` trials, writing one double per trial into its own slot of the
// returned vector — trivially worker-count invariant.
std::vector<double> per_trial_values(long trials, std::uint64_t base_seed,
                                     const std::function<double(long, Xoshiro256pp&)>& trial_fn) {
    std::vector<double> out(static_cast<std::size_t>(trials), 0.0);
    const long nblocks = (trials + kTrialBlock - 1) / kTrialBlock;
    parallel_for(static_cast<int>(nblocks), [&](int b) {
        const long lo = static_cast<long>(b) * kTrialBlock;
        const long hi = std::min(trials, lo + kTrialBlock);
        for (long t = lo; t < hi; ++t) {
            Xoshiro256pp rng(trial_seed(base_seed, t));
            out[static_cast<std::size_t>(t)] = trial_fn(t, rng);
        }
    });
    return out;
}

// Runs `trials` trials, each incrementing up to `npoints` hit counters, and
// returns the summed counts. Trial t draws from the generator seeded by
// trial_seed(base_seed, t); blocks are tallied independently and reduced in
// index order, making the result worker-count invariant.
std::vector<long> tally_trials(long trials, std::size_t npoints, std::uint64_t base_seed,
                               const std::function<void(long, Xoshiro256pp&, long*)>& trial_fn) {
    const long nblocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<std::vector<long>> block_counts(static_cast<std::size_t>(nblocks));
    parallel_for(static_cast<int>(nblocks), [&](int b) {
        std::vector<long> counts(npoints, 0);
        const long lo = static_cast<long>(b) * kTrialBlock;
        const long hi = std::min(trials, lo + kTrialBlock);
        for (long t = lo; t < hi; ++t) {
            Xoshiro256pp rng(trial_seed(base_seed, t));
            trial_fn(t, rng, counts.data());
        }
        block_counts[static_cast<std::size_t>(b)] = std::move(counts);
    });
    std::vector<long> total(npoints, 0);
    for (const std::vector<long>& counts : block_counts)
        for (std::size_t i = 0; i < npoints; ++i) total[i] += counts[i];
    return total;
}

McEstimate binomial_estimate(long hits, long trials) {
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    McEstimate est;
    est.value = p;
    est.ci_halfwidth = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    est.trials = trials;
    return est;
}

void check_common(const NetworkParams& params, int max_order, long trials, const char* who) {
    params.validate();
    if (max_order < 0) throw std::invalid_argument(std::string(who) + ": max_order must be >= 0");
    if (trials < 1) throw std::invalid_argument(std::string(who) + ": trials must be >= 1");
    if (trials > 2000000000L)
        throw std::invalid_argument(std::string(who) + ": trials out of range");
}

void check_receiver(const NetworkParams& params, Vec2 receiver, const char* who) {
    const double a = params.room_half_side;
    if (!(std::fabs(receiver.x) <= a && std::fabs(receiver.y) <= a))
        throw std::invalid_argument(std::string(who) + ": receiver must lie inside the room");
}

}  // namespace

NetworkRealization sample_network(const NetworkParams& params, int max_order, SampleMode mode,
                                  std::uint64_t seed) {
    params.validate();
    require(max_order >= 0, "sample_network: max_order must be >= 0");
    Xoshiro256pp rng(seed);
    return sample_stream(params, max_order, mode, rng, seed);
}

SinrSample evaluate_sinr(const NetworkRealization& realization, Vec2 receiver,
                         const ChannelConstants& consts, double eta) {
    const PowerScan scan = scan_powers(realization, receiver, consts, eta);
    if (scan.best_index < 0) return {};
    if (std::isinf(scan.best))
        return {std::numeric_limits<double>::infinity(), scan.best_index};
    const double denom = (scan.total - scan.best) + consts.sigma2;
    return {scan.best / denom, scan.best_index};
}

CoverageCurve estimate_coverage(const NetworkParams& params, std::optional<Vec2> receiver,
                                const std::vector<double>& tau_grid, int max_order,
                                SampleMode mode, long trials, std::uint64_t base_seed) {
    check_common(params, max_order, trials, "estimate_coverage");
    for (double tau : tau_grid)
        require(std::isfinite(tau) && tau > 0.0, "estimate_coverage: thresholds must be > 0");
    if (receiver) check_receiver(params, *receiver, "estimate_coverage");

    const ChannelConstants consts = derive_constants(params);
    const double eta = params.reflection_coeff;
    const double a = params.room_half_side;

    const std::vector<long> hits = tally_trials(
        trials, tau_grid.size(), base_seed, [&](long t, Xoshiro256pp& rng, long* counts) {
            Vec2 y;
            if (receiver) {
                y = *receiver;
            } else {
                y.x = rng.uniform(-a, a);
                y.y = rng.uniform(-a, a);
            }
            const NetworkRealization net =
                sample_stream(params, max_order, mode, rng, trial_seed(base_seed, t));
            const double sinr = evaluate_sinr(net, y, consts, eta).sinr;
            for (std::size_t i = 0; i < tau_grid.size(); ++i)
                if (sinr > tau_grid[i]) ++counts[i];
        });

    CoverageCurve curve;
    curve.thresholds = tau_grid;
    curve.kind = CurveKind::SINR;
    curve.method = CurveMethod::MONTE_CARLO;
    curve.values.resize(tau_grid.size());
    curve.ci_halfwidth.resize(tau_grid.size());
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        const McEstimate est = binomial_estimate(hits[i], trials);
        curve.values[i] = est.value;
        curve.ci_halfwidth[i] = est.ci_halfwidth;
    }
    return curve;
}

std::vector<McEstimate> estimate_interference_cdf(const NetworkParams& params, Vec2 receiver,
                                                  const std::vector<double>& s_grid,
                                                  int max_order, SampleMode mode, long trials,
                                                  std::uint64_t base_seed) {
    check_common(params, max_order, trials, "estimate_interference_cdf");
    for (double s : s_grid)
        require(std::isfinite(s), "estimate_interference_cdf: grid values must be finite");
    check_receiver(params, receiver, "estimate_interference_cdf");

    const ChannelConstants consts = derive_constants(params);
    const double eta = params.reflection_coeff;

    const std::vector<long> hits = tally_trials(
        trials, s_grid.size(), base_seed, [&](long t, Xoshiro256pp& rng, long* counts) {
            const NetworkRealization net =
                sample_stream(params, max_order, mode, rng, trial_seed(base_seed, t));
            const double interference = scan_powers(net, receiver, consts, eta).total;
            for (std::size_t i = 0; i < s_grid.size(); ++i)
                if (interference < s_grid[i]) ++counts[i];
        });

    std::vector<McEstimate> out;
    out.reserve(s_grid.size());
    for (std::size_t i = 0; i < s_grid.size(); ++i) out.push_back(binomial_estimate(hits[i], trials));
    return out;
}

std::vector<double> sample_sinr(const NetworkParams& params, std::optional<Vec2> receiver,
                                int max_order, SampleMode mode, long trials,
                                std::uint64_t base_seed) {
    check_common(params, max_order, trials, "sample_sinr");
    if (receiver) check_receiver(params, *receiver, "sample_sinr");
    const ChannelConstants consts = derive_constants(params);
    const double eta = params.reflection_coeff;
    const double a = params.room_half_side;
    return per_trial_values(trials, base_seed, [&](long t, Xoshiro256pp& rng) {
        Vec2 y;
        if (receiver) {
            y = *receiver;
        } else {
            y.x = rng.uniform(-a, a);
            y.y = rng.uniform(-a, a);
        }
        const NetworkRealization net =
            sample_stream(params, max_order, mode, rng, trial_seed(base_seed, t));
        return evaluate_sinr(net, y, consts, eta).sinr;
    });
}

std::vector<double> sample_interference(const NetworkParams& params, Vec2 receiver,
                                        int max_order, SampleMode mode, long trials,
                                        std::uint64_t base_seed) {
    check_common(params, max_order, trials, "sample_interference");
    check_receiver(params, receiver, "sample_interference");
    const ChannelConstants consts = derive_constants(params);
    const double eta = params.reflection_coeff;
    return per_trial_values(trials, base_seed, [&](long t, Xoshiro256pp& rng) {
        const NetworkRealization net =
            sample_stream(params, max_order, mode, rng, trial_seed(base_seed, t));
        return scan_powers(net, receiver, consts, eta).total;
    });
}

CoverageCurve estimate_rate_coverage(const NetworkParams& params, std::optional<Vec2> receiver,
                                     const std::vector<double>& rho_grid, int max_order,
                                     SampleMode mode, long trials, std::uint64_t base_seed) {
    check_common(params, max_order, trials, "estimate_rate_coverage");
    for (double rho : rho_grid)
        require(std::isfinite(rho) && rho >= 0.0,
                "estimate_rate_coverage: rate targets must be >= 0");
    if (receiver) check_receiver(params, *receiver, "estimate_rate_coverage");

    const ChannelConstants consts = derive_constants(params);
    const double eta = params.reflection_coeff;
    const double a = params.room_half_side;
    const double load = mean_load(params.user_density, params.density);
    const double rate_scale = params.zeta1 * params.bandwidth / load;

    const std::vector<long> hits = tally_trials(
        trials, rho_grid.size(), base_seed, [&](long t, Xoshiro256pp& rng, long* counts) {
            Vec2 y;
            if (receiver) {
                y = *receiver;
            } else {
                y.x = rng.uniform(-a, a);
                y.y = rng.uniform(-a, a);
            }
            const NetworkRealization net =
                sample_stream(params, max_order, mode, rng, trial_seed(base_seed, t));
            const double sinr = evaluate_sinr(net, y, consts, eta).sinr;
            const double rate = rate_scale * std::log2(1.0 + params.zeta2 * sinr);
            for (std::size_t i = 0; i < rho_grid.size(); ++i)
                if (rate > rho_grid[i]) ++counts[i];
        });

    CoverageCurve curve;
    curve.thresholds = rho_grid;
    curve.kind = CurveKind::RATE;
    curve.method = CurveMethod::MONTE_CARLO;
    curve.values.resize(rho_grid.size());
    curve.ci_halfwidth.resize(rho_grid.size());
    for (std::size_t i = 0; i < rho_grid.size(); ++i) {
        const McEstimate est = binomial_estimate(hits[i], trials);
        curve.values[i] = est.value;
        curve.ci_halfwidth[i] = est.ci_halfwidth;
    }
    return curve;
}

}  // namespace attocell
