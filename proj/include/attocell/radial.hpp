#pragma once

#include "attocell/geometry.hpp"

#include <complex>
#include <vector>

namespace attocell {

// Controls for building a RadialProfile.
struct ProfileSpec {
    int panel_order = 16;   // Legendre coefficients kept per panel
    int max_panels = 3000;  // refinement budget
    double rel_tol = 1e-8;  // L1 target on the weight, relative to the area
};

// One-dimensional reduction of integrals of radial gain kernels over a
// Region.  With u(r) = (r^2 + h^2)^(-beta) and arc(r) the angular measure of
// the radius-r circle inside the region,
//   integral over region of g(u(x)) dx  =  integral of g(u) w(u) du,
//   w(u) = arc(r(u)) * u^(-1 - 1/beta) / (2 beta).
// The weight is stored as piecewise Legendre expansions on panels split at
// every geometric breakpoint (corner distances, edge tangencies, clip
// radius), refined adaptively.  Panels do not depend on the transform
// argument, so each exp_integral call costs panels x order work at ANY s —
// including |s| far beyond what direct 2D quadrature could resolve.
//
// Zero mounting height with the origin inside (or on the boundary of) the
// region makes the gain unbounded.  Below the first geometric breakpoint the
// region is an exact circular sector, so the u > tail_cut_u() part of the
// weight is the pure power law  theta * u^(-1-1/beta) / (2 beta)  and every
// integral over it is evaluated in closed form (exp_integral_en).  Numeric
// panels then only ever span a modest gain range.
//
// Preconditions: squares pairwise interior-disjoint; clip disk (if any)
// centered at the origin; the origin is the receiver location.
class RadialProfile {
  public:
    static RadialProfile build(const Region& region, double h, double beta,
                               const ProfileSpec& spec = {});

    // integral over region of e^{-s u(x)} dx; needs Re(s) >= 0 (or pure
    // imaginary s).  |result error| <= build_error() uniformly in such s.
    std::complex<double> exp_integral(std::complex<double> s) const;

    double area() const;          // integral of w du (region area, tail included)
    double ell_integral() const;  // integral of u w du; +infinity in tail mode
    // Largest gain covered by numeric panels.  In tail mode this is
    // tail_cut_u(); the analytic power tail above it needs no resolution from
    // any caller, so this is also the oscillation scale of exp_integral.
    double max_u() const;
    double min_u() const;  // smallest represented gain
    // Certified absolute L1 defect of the stored weight.
    double build_error() const;
    // C with |exp_integral(j t)| <= C / |t| + build_error(): endpoint values
    // plus total-variation bound of the stored weight (tail included).
    double ibp_constant() const;
    bool has_tail() const;     // analytic power tail present (zero height)
    double tail_cut_u() const; // gain where the analytic tail starts (0 if none)
    int panel_count() const;
    bool empty() const;

  private:
    struct Panel {
        double lo = 0.0;
        double width = 0.0;
        std::vector<double> coeffs;
        double err = 0.0;  // L1 tail estimate of the truncated expansion
    };
    std::vector<Panel> panels_;  // ascending in u
    double build_error_ = 0.0;
    int order_ = 0;
    bool has_tail_ = false;
    double tail_coeff_ = 0.0;  // theta / (2 beta)
    double tail_cut_u_ = 0.0;  // panels end here; power law beyond
    double tail_nu_ = 0.0;     // 1 + 1/beta
    double tail_scale_ = 0.0;  // tail_cut_u^(-1/beta)
};

}  // namespace attocell
