#pragma once

#include "attocell/channel.hpp"
#include "attocell/geometry.hpp"
#include "attocell/quadrature.hpp"
#include "attocell/radial.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace attocell {

// Raised when an operation is asked to evaluate outside the regime in which
// its closed-form derivation holds (SINR thresholds below one, and rate
// targets that map below that threshold).
struct ValidityError : std::domain_error {
    using std::domain_error::domain_error;
};

// One deployment plus one receiver location, with the derived constants
// pinned alongside so corollary transforms can overwrite them on copies.
struct Scenario {
    NetworkParams params;
    ChannelConstants consts;
    Vec2 user;  // receiver position, |user.x| <= a, |user.y| <= a
};

// Validates the parameter set and the receiver location, derives constants.
Scenario make_scenario(const NetworkParams& params, Vec2 user);

// A probability computed by certified numerics: `value` is the estimate,
// `uncertainty` an absolute bound on its numerical error, `certified`
// whether the requested tolerance was met (a false value still carries the
// best available estimate and an honest bound).  `clamped` records that the
// raw estimate fell outside [0, 1] and was clipped.
struct Estimate {
    double value = 0.0;
    double uncertainty = 0.0;
    bool certified = false;
    bool clamped = false;
};

enum class CurveKind { SINR, RATE };
enum class CurveMethod { ANALYTIC, MONTE_CARLO };

// A coverage probability sampled over an ascending threshold grid.
// `ci_halfwidth` is per-point: confidence halfwidths for simulation curves,
// numerical uncertainty bounds for analytic curves.
struct CoverageCurve {
    std::vector<double> thresholds;
    std::vector<double> values;
    CurveKind kind = CurveKind::SINR;
    CurveMethod method = CurveMethod::ANALYTIC;
    std::vector<double> ci_halfwidth;
};

// Default tolerances for coverage probabilities: 1e-6 relative on inner
// integrals, 1e-4 absolute on the probability itself.
QuadratureSpec default_coverage_spec();

// Laplace functional of the aggregate interference at the receiver,
//   E[e^{-s I}] = exp(-lambda * sum_k integral over ring k of
//                     (1 - e^{-s eta^k (|z|^2+h^2)^{-beta}}) dz),
// for reflections up to `max_order`.  Requires Re(s) >= 0 or s imaginary.
// Exactly 1 at s = 0 and in the sparse limit lambda -> 0.
std::complex<double> laplace_interference(std::complex<double> s, const Scenario& scenario,
                                          int max_order, const ProfileSpec& pspec = {});

// Exponential transform of the path-gain kernel over one prepared region:
//   integral over region of e^{-s (|z|^2 + h^2)^{-beta}} dz.
// Reflection attenuation is folded into s by the caller (pass s * eta^k for
// an order-k region).  At s = 0 this is the region area.
std::complex<double> region_laplace(std::complex<double> s, const Region& region,
                                    const ChannelConstants& consts,
                                    const ProfileSpec& pspec = {});

// Characteristic-side transform of the interference: the same functional as
// laplace_interference continued to the opposite half-plane argument,
// interference_transform(s) = laplace_interference(-s).  Only s with
// Re(s) <= 0 (notably s = -j t, whose value is the characteristic function
// of I at t) stays within the region of convergence.
std::complex<double> interference_transform(std::complex<double> s, const Scenario& scenario,
                                            int max_order, const ProfileSpec& pspec = {});

// P[I < s]: distribution function of the aggregate interference-style sum
// over every transmitter (no serving exclusion), by Fourier inversion of its
// characteristic function interference_transform(-jt).  Requires s > 0; the
// law lives on [0, +inf) with an atom only at 0 (the empty network), so every
// s > 0 is a continuity point.
Estimate interference_cdf(const Scenario& scenario, double s, int max_order,
                          const QuadratureSpec& spec = default_coverage_spec());

// P[SINR > tau] at the scenario's receiver, counting reflection paths up to
// `max_order` both as signal candidates and as interference.  Requires
// tau >= 1 (at most one transmitter can exceed such a threshold; below it
// the closed form does not hold and a ValidityError is thrown).
Estimate sinr_coverage(const Scenario& scenario, double tau, int max_order,
                       const QuadratureSpec& spec = default_coverage_spec());

// Coverage probability averaged over a uniformly random receiver position in
// the room.  The average is taken by a grid_n x grid_n Gauss rule mapped onto
// one octant of the square (the integrand is dihedral-symmetric), an 8x
// saving over the full square.
Estimate sinr_coverage_typical(const NetworkParams& params, double tau, int max_order,
                               int grid_n = 8,
                               const QuadratureSpec& spec = default_coverage_spec());

// Average number of users sharing the serving cell: 1 + 1.28 * lambda_u / lambda.
double mean_load(double lambda_u, double lambda);

// SINR threshold equivalent to the rate target rho under the modified
// Shannon law rate = zeta1 * (W / n) * log2(1 + zeta2 * SINR):
//   tau = (2^(rho n / (W zeta1)) - 1) / zeta2.
// `valid` is false when tau < 1, where coverage formulas do not apply.
struct RateThreshold {
    double tau = 0.0;
    bool valid = false;
};

RateThreshold rate_to_sinr_threshold(double rho, double n, double bandwidth, double zeta1,
                                     double zeta2);

// P[rate > rho] at the scenario's receiver: sinr_coverage at the equivalent
// threshold, with the cell load taken from the scenario's user density.
// Throws ValidityError when the equivalent threshold is below one.
Estimate rate_coverage(const Scenario& scenario, double rho, int max_order,
                       const QuadratureSpec& spec = default_coverage_spec());

// A pair of scenarios whose coverage probabilities agree by a symmetry or
// limit argument; `left` and `right` are ready for sinr_coverage.
struct CorollaryPair {
    Scenario left;
    Scenario right;
    double suggested_tau = 2.0;  // a threshold at which the pair is classically quoted
};

// Exact coverage equivalences on copies of `base` (its receiver position is
// replaced):
//   1: corner receiver  ==  center receiver at quarter density in a
//      double-side room;
//   2: with noise removed, corner at mounting height h  ==  center at h/2;
//   3: with noise removed and the mounting height taken to zero, corner ==
//      center (the geometry becomes scale-free).
// Cases 2 and 3 overwrite sigma2 (and 3 the height) on the derived constants;
// case 3 keeps the base alpha since no result depends on it once noise is 0.
// Cases 1 and 2 are direct-path statements: evaluate both sides with
// max_order 0, because the two rooms' wall-image lattices differ and the
// equality genuinely breaks once reflection rings are added.  Case 3 is
// scale-free and holds at any order.
CorollaryPair corollary_transform(int which, const Scenario& base);

}  // namespace attocell
