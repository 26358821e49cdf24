#pragma once

#include "attocell/geometry.hpp"

#include <complex>
#include <functional>
#include <limits>

namespace attocell {

// Shared tolerance/budget knobs for the numerical integrators.
struct QuadratureSpec {
    double rel_tol = 1e-6;
    double abs_tol = 1e-8;
    int max_panels = 20000;  // cells (2D) or subpanels (1D) before giving up
    int panel_order = 16;    // Gauss nodes per panel
};

struct ComplexIntegral {
    std::complex<double> value;
    double error_bound = 0.0;
    bool certified = false;  // error_bound met the requested tolerance
};

// Integral of f over (union of squares) ∩ clip disk.  Smooth cells use
// tensor Gauss panels with split-comparison refinement; cells straddling the
// disk boundary are subdivided toward the arc and finished with exact
// disk-cell areas weighting a local sample of f.
ComplexIntegral integrate_region(const std::function<std::complex<double>(Vec2)>& f,
                                 const Region& region, const QuadratureSpec& spec = {});

struct TailIntegral {
    std::complex<double> value;
    double error_bound = 0.0;
    bool certified = false;
    double t_reached = 0.0;   // upper end of the last octave integrated
    bool plateaued = false;   // |g|·t stopped decaying before certification
};

// Integral of g over [t0, ∞) for integrands that oscillate and (eventually)
// decay.  Panels grow in octaves, each capped to a few oscillation periods
// of phase rate `osc_scale`; truncation is certified by whichever engages
// first: a caller-supplied bound on the remaining tail, the geometric decay
// of paired octave contributions, or the decay of the envelope max |t·g(t)|.
TailIntegral oscillatory_tail_integral(
    const std::function<std::complex<double>(double)>& g, double t0,
    const QuadratureSpec& spec, double osc_scale = 0.0,
    const std::function<double(double)>& tail_bound = {});

struct CdfResult {
    double value = 0.0;        // clamped to [0, 1]
    double uncertainty = 0.0;  // absolute bound: quadrature + truncation (+ damping)
    bool certified = false;
};

struct GilPelaezOptions {
    QuadratureSpec quad;
    // E[X] when known: fixes the t→0 limit of the integrand analytically.
    double mean = std::numeric_limits<double>::quiet_NaN();
    // Additional phase rate of cf beyond |s| (largest atom / gain scale).
    double osc_scale = 0.0;
    // Explicit Gaussian smoothing: evaluates the law of X + damping_sigma·Z.
    double damping_sigma = 0.0;
    // Retry with automatic damping when no tail rule certifies (point masses
    // and other non-decaying characteristic functions).
    bool auto_damp = true;
    // Override the first panel edge (else scale/2^12, or scale/2^28 without mean).
    double t_floor = 0.0;
    // Certified bound on |∫_T^∞ Im[e^{-jts} cf]/t dt| as a function of T.
    std::function<double(double)> tail_bound;
};

// P(X < s) = 1/2 − (1/π)·∫_0^∞ Im[e^{−jts}·cf(t)]/t dt, clamped to [0, 1].
CdfResult gil_pelaez_cdf(const std::function<std::complex<double>(double)>& cf, double s,
                         const GilPelaezOptions& options);
CdfResult gil_pelaez_cdf(const std::function<std::complex<double>(double)>& cf, double s,
                         const QuadratureSpec& spec);

}  // namespace attocell
