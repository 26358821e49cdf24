#include "attocell/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "attocell/filon.hpp"

namespace attocell {

namespace {

using cplx = std::complex<double>;

double eta_power(double eta, int k) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= eta;
    return p;
}

void check_order(int max_order) {
    if (max_order < 0 || max_order > 4)
        throw std::invalid_argument("reflection order must be in [0, 4]");
}

// Radial reductions of every ring that contributes to one coverage
// evaluation.  The signal side is clipped to the reach disk of its
// reflection order at the given threshold; the interference side is the
// whole ring.  Rings whose contribution vanishes identically (no reach, or
// eta^k = 0) are simply absent, which is what makes eta = 0 reproduce the
// zero-reflection results exactly.
struct CoverageKernel {
    std::vector<RadialProfile> signal;
    std::vector<double> signal_eta;
    std::vector<RadialProfile> interf;
    std::vector<double> interf_eta;
    double b_area = 0.0;  // exact area of the coverage-candidate set
    double lambda = 0.0;
    double sigma2 = 0.0;
    double tau = 1.0;
    bool heavy_tail = false;
};

CoverageKernel build_kernel(const Scenario& scenario, double tau, int max_order,
                            const ProfileSpec& pspec) {
    const NetworkParams& p = scenario.params;
    const ChannelConstants& c = scenario.consts;
    CoverageKernel kern;
    kern.lambda = p.density;
    kern.sigma2 = c.sigma2;
    kern.tau = tau;
    for (int k = 0; k <= max_order; ++k) {
        const double ek = eta_power(p.reflection_coeff, k);
        const Region ring = ring_region(k, scenario.user, p.room_half_side);

        const auto reach =
            signal_radius(k, tau, c.sigma2, p.reflection_coeff, c.beta, c.height);
        if (reach) {
            Region candidate = ring;
            if (std::isfinite(*reach)) candidate.clip = Disk{{0.0, 0.0}, *reach};
            const double area_k = area(candidate);
            if (area_k > 0.0) {
                RadialProfile prof = RadialProfile::build(candidate, c.height, c.beta, pspec);
                if (!prof.empty()) {
                    kern.heavy_tail = kern.heavy_tail || prof.has_tail();
                    kern.signal.push_back(std::move(prof));
                    kern.signal_eta.push_back(ek);
                    kern.b_area += area_k;
                }
            }
        }

        if (ek > 0.0) {
            RadialProfile prof = RadialProfile::build(ring, c.height, c.beta, pspec);
            if (!prof.empty()) {
                kern.heavy_tail = kern.heavy_tail || prof.has_tail();
                kern.interf.push_back(std::move(prof));
                kern.interf_eta.push_back(ek);
            }
        }
    }
    return kern;
}

}  // namespace

Scenario make_scenario(const NetworkParams& params, Vec2 user) {
    params.validate();
    const double a = params.room_half_side;
    if (std::fabs(user.x) > a || std::fabs(user.y) > a)
        throw std::invalid_argument("make_scenario: receiver outside the room footprint");
    return Scenario{params, derive_constants(params), user};
}

QuadratureSpec default_coverage_spec() {
    QuadratureSpec spec;
    spec.rel_tol = 1e-6;
    spec.abs_tol = 1e-4;
    return spec;
}

std::complex<double> laplace_interference(std::complex<double> s, const Scenario& scenario,
                                          int max_order, const ProfileSpec& pspec) {
    check_order(max_order);
    if (std::real(s) < 0.0)
        throw std::invalid_argument("laplace_interference: Re(s) must be >= 0");
    const NetworkParams& p = scenario.params;
    const ChannelConstants& c = scenario.consts;
    cplx exponent = 0.0;
    for (int k = 0; k <= max_order; ++k) {
        const double ek = eta_power(p.reflection_coeff, k);
        if (ek == 0.0 && k > 0) continue;  // path carries no power: term is 0
        const Region ring = ring_region(k, scenario.user, p.room_half_side);
        const RadialProfile prof = RadialProfile::build(ring, c.height, c.beta, pspec);
        if (prof.empty()) continue;
        // Using the profile's own area keeps the s = 0 value exactly 1: both
        // terms share one discretization, so their defect cancels instead of
        // leaking into the exponent.
        exponent += cplx(prof.area(), 0.0) - prof.exp_integral(s * ek);
    }
    return std::exp(-p.density * exponent);
}

std::complex<double> region_laplace(std::complex<double> s, const Region& region,
                                    const ChannelConstants& consts,
                                    const ProfileSpec& pspec) {
    if (std::real(s) < 0.0)
        throw std::invalid_argument("region_laplace: Re(s) must be >= 0");
    const RadialProfile prof = RadialProfile::build(region, consts.height, consts.beta, pspec);
    return prof.exp_integral(s);
}

std::complex<double> interference_transform(std::complex<double> s, const Scenario& scenario,
                                            int max_order, const ProfileSpec& pspec) {
    if (std::real(s) > 0.0)
        throw std::invalid_argument("interference_transform: Re(s) must be <= 0");
    return laplace_interference(-s, scenario, max_order, pspec);
}

Estimate interference_cdf(const Scenario& scenario, double s, int max_order,
                          const QuadratureSpec& spec) {
    check_order(max_order);
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::invalid_argument("interference_cdf: s must be positive and finite");

    const NetworkParams& p = scenario.params;
    const ChannelConstants& c = scenario.consts;

    // Whole-ring radial profiles: the interference sum excludes no transmitter.
    std::vector<RadialProfile> rings;
    std::vector<double> gains;
    bool heavy_tail = false;
    for (int k = 0; k <= max_order; ++k) {
        const double ek = eta_power(p.reflection_coeff, k);
        if (ek == 0.0 && k > 0) continue;  // path carries no power: term is 0
        const Region ring = ring_region(k, scenario.user, p.room_half_side);
        RadialProfile prof = RadialProfile::build(ring, c.height, c.beta, ProfileSpec{});
        if (prof.empty()) continue;
        heavy_tail = heavy_tail || prof.has_tail();
        rings.push_back(std::move(prof));
        gains.push_back(ek);
    }
    if (rings.empty()) return Estimate{1.0, 0.0, true, false};  // I == 0 < s surely

    // Campbell mean (pins the t -> 0 limit; infinite in the zero-height
    // regime, which demotes the head treatment to the mean-free variant),
    // phase-rate scale, and the profiles' certified discretization error.
    double mean_i = 0.0, osc = 0.0, build_err = 0.0;
    for (std::size_t i = 0; i < rings.size(); ++i) {
        mean_i += gains[i] * rings[i].ell_integral();
        osc = std::max(osc, gains[i] * rings[i].max_u());
        build_err += rings[i].build_error();
    }
    const double lambda = p.density;
    mean_i *= lambda;
    if (!std::isfinite(mean_i)) mean_i = std::numeric_limits<double>::quiet_NaN();

    auto cf = [&rings, &gains, lambda](double t) -> cplx {
        cplx expo = 0.0;
        for (std::size_t i = 0; i < rings.size(); ++i)
            expo += cplx(rings[i].area(), 0.0) -
                    rings[i].exp_integral(cplx(0.0, -t * gains[i]));
        return std::exp(-lambda * expo);
    };

    GilPelaezOptions options;
    options.quad = spec;
    options.quad.abs_tol = std::min(0.5, spec.abs_tol);
    options.mean = mean_i;
    options.osc_scale = osc;
    if (heavy_tail) {
        const double head =
            std::pow(0.05 * std::numbers::pi * options.quad.abs_tol, scenario.consts.beta);
        options.t_floor = std::max(1e-280, std::min(std::ldexp(1.0, -28) / (osc + s), head));
    }

    // Truncation is certified by the inverter's own decay envelopes (this
    // characteristic function genuinely decays, stretched-exponentially).
    // What the inverter cannot see is the profiles' discretization defect:
    // |cf_used - cf_exact| <= lambda * build_err * kappa pointwise, which
    // integrates to that constant per unit log-t; 69 e-folds (over e^2 beyond
    // any reachable truncation point) times 1/pi is charged to the result.
    const double kappa = std::exp(lambda * build_err);
    const CdfResult r = gil_pelaez_cdf(cf, s, options);
    const double defect = (69.0 / std::numbers::pi) * lambda * build_err * kappa;
    return Estimate{r.value, r.uncertainty + defect, r.certified, false};
}

Estimate sinr_coverage(const Scenario& scenario, double tau, int max_order,
                       const QuadratureSpec& spec) {
    check_order(max_order);
    if (!(tau >= 1.0))
        throw ValidityError("sinr_coverage: thresholds below one are outside the "
                            "at-most-one-server regime this formula relies on");

    const CoverageKernel kern = build_kernel(scenario, tau, max_order, ProfileSpec{});
    const double scale = kern.lambda * kern.b_area;
    if (!(scale > 0.0)) return Estimate{0.0, 0.0, true, false};

    // Mean of X = I - L/tau (it pins the integrand's t -> 0 limit).  The
    // interference mean is a Campbell sum over ring gain masses; it is
    // infinite in the zero-height regime, which simply demotes the
    // characteristic-function head treatment to the mean-free variant.
    double mean_i = 0.0;
    for (std::size_t i = 0; i < kern.interf.size(); ++i)
        mean_i += kern.interf_eta[i] * kern.interf[i].ell_integral();
    mean_i *= kern.lambda;
    double mean_l = 0.0;
    for (std::size_t i = 0; i < kern.signal.size(); ++i)
        mean_l += kern.signal_eta[i] * kern.signal[i].ell_integral();
    double mean_x = mean_i - mean_l / (tau * kern.b_area);
    if (!std::isfinite(mean_x)) mean_x = std::numeric_limits<double>::quiet_NaN();

    // Phase-rate scale of the characteristic function: the largest gain any
    // component can contribute (numeric panels only; analytic power tails
    // oscillate in closed form and need no resolution).
    double osc_sig = 0.0;
    for (std::size_t i = 0; i < kern.signal.size(); ++i)
        osc_sig = std::max(osc_sig, kern.signal_eta[i] * kern.signal[i].max_u());
    double osc_int = 0.0;
    for (std::size_t i = 0; i < kern.interf.size(); ++i)
        osc_int = std::max(osc_int, kern.interf_eta[i] * kern.interf[i].max_u());
    const double osc_scale = kern.sigma2 + osc_sig / tau + osc_int;

    // Truncation bound for the coverage integrand:
    //   |F(jt/tau)| <= sum_k (ibp_k * tau / (eta^k t) + build_err_k),
    //   |K(jt)|     <= exp(lambda * sum build_err)   (true value is <= 1),
    // so the remaining tail integral from T is bounded by
    //   kappa * (tau * C / T + build_errs * log-factor) / |B|.
    // The log factor 69 covers the next e^69 in T — far beyond any point the
    // engine can reach — while keeping the bound finite.
    double c_over = 0.0, be_f = 0.0, be_k = 0.0;
    for (std::size_t i = 0; i < kern.signal.size(); ++i) {
        c_over += kern.signal[i].ibp_constant() / kern.signal_eta[i];
        be_f += kern.signal[i].build_error();
    }
    for (const auto& prof : kern.interf) be_k += prof.build_error();
    const double kappa = std::exp(kern.lambda * be_k);
    const double b_area = kern.b_area;
    const double tau_c = tau;
    auto tail_bound = [kappa, tau_c, c_over, be_f, b_area](double t_end) {
        return kappa * (tau_c * c_over / t_end + 69.0 * be_f) / b_area;
    };

    auto cf = [&kern](double t) -> cplx {
        cplx f = 0.0;
        for (std::size_t i = 0; i < kern.signal.size(); ++i)
            f += kern.signal[i].exp_integral(cplx(0.0, t * kern.signal_eta[i] / kern.tau));
        cplx expo = 0.0;
        for (std::size_t i = 0; i < kern.interf.size(); ++i)
            expo += cplx(kern.interf[i].area(), 0.0) -
                    kern.interf[i].exp_integral(cplx(0.0, -t * kern.interf_eta[i]));
        return f * std::exp(-kern.lambda * expo) / kern.b_area;
    };

    GilPelaezOptions options;
    options.quad = spec;
    options.quad.abs_tol = std::min(0.5, spec.abs_tol / scale);
    options.mean = mean_x;
    options.osc_scale = osc_scale;
    options.tail_bound = tail_bound;
    if (kern.heavy_tail) {
        // Heavy-tailed interference bends the integrand like t^(1/beta - 1)
        // near zero; start low enough that the head stub's share of the
        // probability stays an order below the absolute target.
        const double head = std::pow(0.05 * std::numbers::pi * options.quad.abs_tol,
                                     scenario.consts.beta);
        options.t_floor =
            std::max(1e-280, std::min(std::ldexp(1.0, -28) / (osc_scale + kern.sigma2), head));
    }

    const CdfResult r = gil_pelaez_cdf(cf, -kern.sigma2, options);
    Estimate out;
    const double raw = scale * r.value;
    out.value = std::clamp(raw, 0.0, 1.0);
    out.clamped = raw != out.value;
    out.uncertainty = scale * r.uncertainty;
    out.certified = r.certified;
    return out;
}

Estimate sinr_coverage_typical(const NetworkParams& params, double tau, int max_order,
                               int grid_n, const QuadratureSpec& spec) {
    if (grid_n < 2) throw std::invalid_argument("sinr_coverage_typical: grid_n must be >= 2");
    params.validate();
    const ChannelConstants consts = derive_constants(params);
    const double a = params.room_half_side;
    const GaussRule& rule = gauss_rule(grid_n);

    // Average over the room = 8 x integral over one octant {0 <= y2 <= y1}.
    // The octant triangle is mapped to a unit square (y1 = u, y2 = v u,
    // Jacobian u), so a tensor Gauss grid integrates it with grid_n^2
    // coverage evaluations instead of the full square's 8x as many.
    double acc = 0.0, unc = 0.0;
    bool certified = true, clamped = false;
    for (int i = 0; i < grid_n; ++i) {
        const double u = a * 0.5 * (rule.nodes[static_cast<std::size_t>(i)] + 1.0);
        for (int j = 0; j < grid_n; ++j) {
            const double v = 0.5 * (rule.nodes[static_cast<std::size_t>(j)] + 1.0);
            const Scenario sc{params, consts, Vec2{u, v * u}};
            const Estimate e = sinr_coverage(sc, tau, max_order, spec);
            const double w = rule.weights[static_cast<std::size_t>(i)] *
                             rule.weights[static_cast<std::size_t>(j)] * u;
            acc += w * e.value;
            unc += w * e.uncertainty;
            certified = certified && e.certified;
            clamped = clamped || e.clamped;
        }
    }
    Estimate out;
    const double raw = acc / (2.0 * a);  // (8 / 4a^2) * (a/4) * sum
    out.value = std::clamp(raw, 0.0, 1.0);
    out.clamped = clamped || raw != out.value;
    out.uncertainty = unc / (2.0 * a);
    out.certified = certified;
    return out;
}

double mean_load(double lambda_u, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("mean_load: density must be > 0");
    if (lambda_u < 0.0) throw std::invalid_argument("mean_load: user density must be >= 0");
    return 1.0 + 1.28 * lambda_u / lambda;
}

RateThreshold rate_to_sinr_threshold(double rho, double n, double bandwidth, double zeta1,
                                     double zeta2) {
    if (!(n >= 1.0)) throw std::invalid_argument("rate_to_sinr_threshold: load must be >= 1");
    if (!(bandwidth > 0.0) || !(zeta1 > 0.0) || !(zeta2 > 0.0))
        throw std::invalid_argument("rate_to_sinr_threshold: W, zeta1, zeta2 must be > 0");
    if (rho < 0.0) throw std::invalid_argument("rate_to_sinr_threshold: rate must be >= 0");
    RateThreshold out;
    out.tau = (std::exp2(rho * n / (bandwidth * zeta1)) - 1.0) / zeta2;
    out.valid = out.tau >= 1.0;
    return out;
}

Estimate rate_coverage(const Scenario& scenario, double rho, int max_order,
                       const QuadratureSpec& spec) {
    const double n = mean_load(scenario.params.user_density, scenario.params.density);
    const RateThreshold rt = rate_to_sinr_threshold(rho, n, scenario.params.bandwidth,
                                                    scenario.params.zeta1,
                                                    scenario.params.zeta2);
    if (!rt.valid)
        throw ValidityError("rate_coverage: the rate target maps to an SINR threshold "
                            "below one, outside the closed form's validity");
    return sinr_coverage(scenario, rt.tau, max_order, spec);
}

CorollaryPair corollary_transform(int which, const Scenario& base) {
    const NetworkParams& bp = base.params;
    const double a = bp.room_half_side;
    const Vec2 corner{a, a};
    CorollaryPair out;
    switch (which) {
        case 1: {
            out.left = make_scenario(bp, corner);
            NetworkParams rp = bp;
            rp.density = bp.density / 4.0;
            rp.room_half_side = 2.0 * a;
            out.right = make_scenario(rp, Vec2{0.0, 0.0});
            out.suggested_tau = 2.0;
            break;
        }
        case 2: {
            out.left = make_scenario(bp, corner);
            out.left.consts.sigma2 = 0.0;
            NetworkParams rp = bp;
            rp.height = bp.height / 2.0;
            out.right = make_scenario(rp, Vec2{0.0, 0.0});
            out.right.consts.sigma2 = 0.0;
            out.suggested_tau = 1.5;
            break;
        }
        case 3: {
            // Zero height makes the geometry scale-free, so corner and
            // center agree.  Constants are copied from the base derivation
            // (the lumped gain is irrelevant once noise is zero) with the
            // height and noise forced on the copies.
            out.left = make_scenario(bp, corner);
            out.left.consts.sigma2 = 0.0;
            out.left.consts.height = 0.0;
            out.right = make_scenario(bp, Vec2{0.0, 0.0});
            out.right.consts.sigma2 = 0.0;
            out.right.consts.height = 0.0;
            out.suggested_tau = 2.0;
            break;
        }
        default:
            throw std::invalid_argument("corollary_transform: which must be 1, 2, or 3");
    }
    return out;
}

}  // namespace attocell
