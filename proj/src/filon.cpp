#include "attocell/filon.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace attocell {

namespace {

constexpr int kMaxOrder = 64;

GaussRule make_rule(int n) {
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < n / 2; ++i) {
        // i-th root from the top end, Newton-refined from the Chebyshev guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        {
            // One clean derivative at the converged root for the weight.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;  // exact antisymmetry by construction
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) {
        const int mid = n / 2;
        rule.nodes[mid] = 0.0;
        double p0 = 1.0, p1 = 0.0;  // P_k(0) recurrence
        for (int k = 2; k <= n; ++k) {
            const double p2 = (-(k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (0.0 - p0) / (0.0 - 1.0);  // P_n'(0) = n P_{n-1}(0)
        rule.weights[mid] = 2.0 / (dp * dp);
    }
    return rule;
}

}  // namespace

int max_gauss_order() { return kMaxOrder; }

const GaussRule& gauss_rule(int order) {
    static const std::vector<GaussRule> cache = [] {
        std::vector<GaussRule> rules;
        rules.reserve(kMaxOrder + 1);
        rules.push_back({});  // order 0 unused
        for (int n = 1; n <= kMaxOrder; ++n) rules.push_back(make_rule(n));
        return rules;
    }();
    if (order < 1 || order > kMaxOrder)
        throw std::invalid_argument("gauss_rule: order out of range");
    return cache[static_cast<std::size_t>(order)];
}

std::vector<double> legendre_coeffs(const std::function<double(double)>& f, int order) {
    if (order < 1) throw std::invalid_argument("legendre_coeffs: order must be >= 1");
    const int g = std::min(order + 8, kMaxOrder);
    const GaussRule& rule = gauss_rule(g);
    std::vector<double> coeffs(static_cast<std::size_t>(order), 0.0);
    for (int i = 0; i < g; ++i) {
        const double x = rule.nodes[i];
        const double wf = rule.weights[i] * f(x);
        double p0 = 1.0, p1 = x;
        coeffs[0] += wf;
        if (order > 1) coeffs[1] += wf * x;
        for (int n = 2; n < order; ++n) {
            const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
            coeffs[static_cast<std::size_t>(n)] += wf * p2;
            p0 = p1;
            p1 = p2;
        }
    }
    for (int n = 0; n < order; ++n) coeffs[static_cast<std::size_t>(n)] *= (n + 0.5);
    return coeffs;
}

void legendre_coeffs_from_nodes(const std::complex<double>* values, int order,
                                std::complex<double>* coeffs) {
    // Row n of the cached matrix holds (n + 1/2) w_i P_n(x_i) over the nodes
    // of gauss_rule(order), flattened row-major per order.
    static const std::vector<std::vector<double>> cache = [] {
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(kMaxOrder) + 1);
        for (int order = 1; order <= kMaxOrder; ++order) {
            const GaussRule& rule = make_rule(order);
            std::vector<double>& mat = rows[static_cast<std::size_t>(order)];
            mat.assign(static_cast<std::size_t>(order) * order, 0.0);
            for (int i = 0; i < order; ++i) {
                const double x = rule.nodes[static_cast<std::size_t>(i)];
                const double w = rule.weights[static_cast<std::size_t>(i)];
                double p0 = 1.0, p1 = x;
                mat[static_cast<std::size_t>(i)] = 0.5 * w;
                if (order > 1) mat[static_cast<std::size_t>(order + i)] = 1.5 * w * x;
                for (int n = 2; n < order; ++n) {
                    const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                    mat[static_cast<std::size_t>(n) * order + static_cast<std::size_t>(i)] =
                        (n + 0.5) * w * p2;
                    p0 = p1;
                    p1 = p2;
                }
            }
        }
        return rows;
    }();
    if (order < 1 || order > kMaxOrder)
        throw std::invalid_argument("legendre_coeffs_from_nodes: order out of range");
    const double* mat = cache[static_cast<std::size_t>(order)].data();
    for (int n = 0; n < order; ++n) {
        std::complex<double> acc = 0.0;
        const double* row = mat + static_cast<std::size_t>(n) * order;
        for (int i = 0; i < order; ++i) acc += row[i] * values[i];
        coeffs[n] = acc;
    }
}

namespace {

using cplx = std::complex<double>;

// Power series: m_n = 2 e^{-c} (-c)^n sum_j c^{2j} / ((2j)!! (2n+2j+1)!!).
void moments_series(cplx c, int nmax, cplx* m) {
    const cplx expc = std::exp(-c);
    const cplx c2 = c * c;
    cplx neg_c_pow = 1.0;     // (-c)^n
    double dfact = 1.0;       // (2n+1)!!
    for (int n = 0; n <= nmax; ++n) {
        if (n > 0) {
            neg_c_pow *= -c;
            dfact *= 2.0 * n + 1.0;
        }
        cplx term = 1.0 / dfact;
        cplx sum = term;
        for (int j = 0; j < 40; ++j) {
            term *= c2 / ((2.0 * j + 2.0) * (2.0 * n + 2.0 * j + 3.0));
            sum += term;
            if (std::abs(term) < 1e-20 * std::abs(sum)) break;
        }
        m[n] = 2.0 * expc * neg_c_pow * sum;
    }
}

// Forward recurrence from the closed forms of m_0, m_1; stable when |c|
// comfortably exceeds every index used.
void moments_forward(cplx c, int nmax, cplx* m) {
    const cplx e2 = std::exp(-2.0 * c);
    const cplx inv_c = 1.0 / c;
    m[0] = (1.0 - e2) * inv_c;
    if (nmax >= 1) m[1] = (1.0 - e2) * inv_c * inv_c - (1.0 + e2) * inv_c;
    for (int n = 1; n < nmax; ++n)
        m[n + 1] = m[n - 1] + ((2.0 * n + 1.0) * inv_c) * m[n];
}

// Normalized backward (Miller) recurrence.  The target sequence is the
// minimal solution for n >> |c|, so a downward pass from a buffered start
// index reproduces it up to one global factor, fixed by the exact identity
// sum_n (-1)^n (2n+1) m_n = 2 (the expansion of e^{-c(x+1)} at x = -1).
void moments_backward(cplx c, int nmax, cplx* m) {
    const double ac = std::abs(c);
    const int start = nmax + 25 + static_cast<int>(std::ceil(1.5 * ac));
    const cplx inv_c = 1.0 / c;
    for (int n = 0; n <= nmax; ++n) m[n] = 0.0;
    cplx up = 0.0;   // trial value at n+1
    cplx cur = 1.0;  // trial value at n
    cplx norm = 0.0;
    for (int n = start; n >= 0; --n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        norm += sign * (2.0 * n + 1.0) * cur;
        if (n <= nmax) m[n] = cur;
        const cplx down = up - ((2.0 * n + 1.0) * inv_c) * cur;  // value at n-1
        up = cur;
        cur = down;
        if (std::abs(cur) > 1e250) {
            const double scale = 1e-250;
            cur *= scale;
            up *= scale;
            norm *= scale;
            for (int k = 0; k <= nmax; ++k) m[k] *= scale;
        }
    }
    const cplx factor = 2.0 / norm;
    for (int n = 0; n <= nmax; ++n) m[n] *= factor;
}

}  // namespace

void scaled_exp_moments(cplx c, int nmax, cplx* out) {
    if (nmax < 0) throw std::invalid_argument("scaled_exp_moments: nmax must be >= 0");
    const double ac = std::abs(c);
    if (ac <= 0.5)
        moments_series(c, nmax, out);
    else if (ac >= 4.0 * std::max(nmax, 1))
        moments_forward(c, nmax, out);
    else
        moments_backward(c, nmax, out);
}

std::vector<cplx> scaled_exp_moments(cplx c, int nmax) {
    std::vector<cplx> m(static_cast<std::size_t>(std::max(nmax, 0)) + 1);
    scaled_exp_moments(c, nmax, m.data());
    return m;
}

cplx exp_integral_en(double nu, cplx z) {
    if (!(nu > 1.0) || nu == std::floor(nu)) {
        throw std::invalid_argument("exp_integral_en: nu must be non-integer and > 1");
    }
    if (std::real(z) < -1e-300) {
        throw std::invalid_argument("exp_integral_en: Re(z) must be >= 0");
    }
    const double az = std::abs(z);
    if (az == 0.0) return cplx(1.0 / (nu - 1.0), 0.0);

    if (az <= 1.5) {
        // E_nu(z) = Gamma(1-nu) z^{nu-1} - sum_{n>=0} (-z)^n / (n! (1 - nu + n)).
        // Alternating series; terms shrink like |z|^n / n!, so ~25 terms give
        // full precision at |z| <= 1.5.
        cplx sum = cplx(1.0 / (1.0 - nu), 0.0);
        cplx term(1.0, 0.0);
        for (int n = 1; n <= 60; ++n) {
            term *= -z / static_cast<double>(n);
            const cplx add = term / (1.0 - nu + n);
            sum += add;
            if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return std::tgamma(1.0 - nu) * std::pow(z, nu - 1.0) - sum;
    }

    // Modified Lentz on the continued fraction
    //   E_nu(z) = e^{-z} / (z + nu - 1*nu/(z + nu + 2 - 2(nu+1)/(z + nu + 4 - ...))),
    // convergent for |arg z| < pi.
    const double tiny = 1e-290;
    cplx b = z + nu;
    cplx c_l = cplx(1.0 / tiny, 0.0);
    cplx d = 1.0 / b;
    cplx f = d;
    for (int k = 1; k <= 4000; ++k) {
        const cplx a = -static_cast<double>(k) * (nu + k - 1.0);
        b += 2.0;
        d = a * d + b;
        if (std::abs(d) < tiny) d = cplx(tiny, 0.0);
        c_l = b + a / c_l;
        if (std::abs(c_l) < tiny) c_l = cplx(tiny, 0.0);
        d = 1.0 / d;
        const cplx delta = c_l * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-z) * f;
}

}  // namespace attocell
