#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace attocell {

// Gauss-Legendre rule on [-1, 1]: `order` nodes, weights summing to 2.
// Nodes are ascending and exactly antisymmetric (node[i] == -node[n-1-i]).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rules for order 1..max_gauss_order(); throws outside that range.
const GaussRule& gauss_rule(int order);
int max_gauss_order();

// First `order` coefficients of f on [-1, 1] in the Legendre basis
// (f ~ sum c_n P_n), by discrete projection on a slightly richer Gauss grid.
std::vector<double> legendre_coeffs(const std::function<double(double)>& f, int order);

// Legendre coefficients of the degree-(order-1) interpolant through complex
// samples taken at the nodes of gauss_rule(order): writes a_0..a_{order-1}
// into `coeffs`.  The transform matrix is cached per order, so this costs one
// dense order x order product.  The trailing coefficients measure how far the
// samples are from polynomial: their magnitude is a practical truncation
// estimate for the Gauss value computed from the same samples.
void legendre_coeffs_from_nodes(const std::complex<double>* values, int order,
                                std::complex<double>* coeffs);

// Moments m_n(c) = integral over [-1, 1] of P_n(x) e^{-c(x+1)} dx for
// n = 0..nmax.  Evaluated by power series (small |c|), normalized backward
// recurrence (moderate |c|), or forward recurrence (|c| >> nmax), so the
// result is accurate for real, imaginary, and mixed c alike.  These are the
// building blocks that turn a per-panel Legendre expansion of a weight
// function into its exponential/oscillatory transform at any frequency.
std::vector<std::complex<double>> scaled_exp_moments(std::complex<double> c, int nmax);

// Allocation-free variant: writes m_0..m_nmax into `out` (size nmax + 1).
void scaled_exp_moments(std::complex<double> c, int nmax, std::complex<double>* out);

// Generalized exponential integral E_nu(z) = integral over t in [1, inf) of
// e^{-z t} t^{-nu} dt, for non-integer nu > 1 and Re(z) >= 0 (purely
// imaginary z included).  E_nu(0) = 1/(nu - 1).  Power series for small |z|,
// modified-Lentz continued fraction otherwise.  This is the closed form for
// the tail of a power-law weight against an exponential/oscillatory kernel.
std::complex<double> exp_integral_en(double nu, std::complex<double> z);

}  // namespace attocell
