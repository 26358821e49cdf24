#include "attocell/quadrature.hpp"

#include "attocell/filon.hpp"
#include "attocell/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace attocell {

namespace {

using cplx = std::complex<double>;

// ---------------------------------------------------------------- 2D cells

enum class CellKind { Outside, Smooth, Partial };

struct Cell {
    double xlo, xhi, ylo, yhi;
    cplx value = 0.0;
    double err = 0.0;
    bool partial = false;
};

struct RegionCtx {
    const std::function<cplx(Vec2)>* f = nullptr;
    const Disk* clip = nullptr;
    int order = 8;
    long long evals = 0;
    long long eval_budget = 0;
};

CellKind classify(const RegionCtx& ctx, const Cell& c) {
    if (!ctx.clip) return CellKind::Smooth;
    const double cx = ctx.clip->center.x, cy = ctx.clip->center.y, r = ctx.clip->radius;
    const double nx = std::clamp(cx, c.xlo, c.xhi) - cx;
    const double ny = std::clamp(cy, c.ylo, c.yhi) - cy;
    if (nx * nx + ny * ny >= r * r) return CellKind::Outside;
    const double fx = std::max(std::fabs(c.xlo - cx), std::fabs(c.xhi - cx));
    const double fy = std::max(std::fabs(c.ylo - cy), std::fabs(c.yhi - cy));
    return (fx * fx + fy * fy <= r * r) ? CellKind::Smooth : CellKind::Partial;
}

cplx gauss_cell(RegionCtx& ctx, double xlo, double xhi, double ylo, double yhi) {
    const GaussRule& rule = gauss_rule(ctx.order);
    ctx.evals += ctx.order * ctx.order;
    const double hx = 0.5 * (xhi - xlo), mx = 0.5 * (xhi + xlo);
    const double hy = 0.5 * (yhi - ylo), my = 0.5 * (yhi + ylo);
    cplx total = 0.0;
    for (int i = 0; i < ctx.order; ++i) {
        const double x = mx + hx * rule.nodes[i];
        cplx row = 0.0;
        for (int j = 0; j < ctx.order; ++j)
            row += rule.weights[j] * (*ctx.f)(Vec2{x, my + hy * rule.nodes[j]});
        total += rule.weights[i] * row;
    }
    return total * hx * hy;
}

// Value estimate: a fine pass over the four quadrants, with the coarse whole-
// cell rule providing the error measure.
void eval_smooth(RegionCtx& ctx, Cell& c) {
    const cplx coarse = gauss_cell(ctx, c.xlo, c.xhi, c.ylo, c.yhi);
    const double xm = 0.5 * (c.xlo + c.xhi), ym = 0.5 * (c.ylo + c.yhi);
    const cplx fine = gauss_cell(ctx, c.xlo, xm, c.ylo, ym) +
                      gauss_cell(ctx, xm, c.xhi, c.ylo, ym) +
                      gauss_cell(ctx, c.xlo, xm, ym, c.yhi) +
                      gauss_cell(ctx, xm, c.xhi, ym, c.yhi);
    c.value = fine;
    c.err = std::abs(fine - coarse);
    c.partial = false;
}

// Cells straddling the clip arc: exact overlap area times a central value,
// with the corner spread of f as the error measure.
bool eval_partial(RegionCtx& ctx, Cell& c) {
    const Disk& disk = *ctx.clip;
    const double w = disk_box_area(disk.radius, c.xlo - disk.center.x, c.xhi - disk.center.x,
                                   c.ylo - disk.center.y, c.yhi - disk.center.y);
    if (w <= 0.0) return false;
    ctx.evals += 5;
    const cplx fc = (*ctx.f)(Vec2{0.5 * (c.xlo + c.xhi), 0.5 * (c.ylo + c.yhi)});
    double osc = 0.0;
    const Vec2 corners[4] = {{c.xlo, c.ylo}, {c.xhi, c.ylo}, {c.xlo, c.yhi}, {c.xhi, c.yhi}};
    for (const Vec2& p : corners) osc = std::max(osc, std::abs((*ctx.f)(p)-fc));
    c.value = fc * w;
    c.err = osc * w;
    c.partial = true;
    return true;
}

struct CellRef {
    double err;
    std::size_t index;
    bool operator<(const CellRef& o) const { return err < o.err; }
};

}  // namespace

ComplexIntegral integrate_region(const std::function<cplx(Vec2)>& f, const Region& region,
                                 const QuadratureSpec& spec) {
    RegionCtx ctx;
    ctx.f = &f;
    ctx.clip = region.clip ? &*region.clip : nullptr;
    ctx.order = std::clamp(spec.panel_order, 4, 16);
    ctx.eval_budget =
        static_cast<long long>(spec.max_panels) * ctx.order * ctx.order * 5;

    std::vector<Cell> cells;
    std::priority_queue<CellRef> queue;
    cplx total = 0.0;
    double total_err = 0.0;
    double scale0 = 0.0;

    auto admit = [&](Cell c) {
        const CellKind kind = classify(ctx, c);
        if (kind == CellKind::Outside) return;
        if (kind == CellKind::Smooth)
            eval_smooth(ctx, c);
        else if (!eval_partial(ctx, c))
            return;
        total += c.value;
        total_err += c.err;
        queue.push({c.err, cells.size()});
        cells.push_back(c);
    };

    for (const auto& s : region.squares) {
        scale0 = std::max(scale0, 2.0 * s.half_side);
        admit(Cell{s.xlo(), s.xhi(), s.ylo(), s.yhi()});
    }

    // Global refinement: always split the cell with the largest error.
    while (!queue.empty()) {
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (total_err <= tol || ctx.evals > ctx.eval_budget) break;
        const CellRef top = queue.top();
        queue.pop();
        const Cell parent = cells[top.index];
        if (parent.xhi - parent.xlo <= 1e-12 * scale0) continue;  // frozen
        total -= parent.value;
        total_err -= parent.err;
        const double xm = 0.5 * (parent.xlo + parent.xhi);
        const double ym = 0.5 * (parent.ylo + parent.yhi);
        admit(Cell{parent.xlo, xm, parent.ylo, ym});
        admit(Cell{xm, parent.xhi, parent.ylo, ym});
        admit(Cell{parent.xlo, xm, ym, parent.yhi});
        admit(Cell{xm, parent.xhi, ym, parent.yhi});
    }

    ComplexIntegral out;
    out.value = total;
    out.error_bound = total_err;
    out.certified = ctx.evals <= ctx.eval_budget &&
                    total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) * 1.01;
    return out;
}

namespace {

// ------------------------------------------------------------- 1D octaves

struct LineCtx {
    const std::function<cplx(double)>* g = nullptr;
    int order = 16;
    long long panels = 0;
    long long panel_budget = 0;
    double max_tg = 0.0;  // max |t·g(t)| seen in the current octave
};

struct PanelOut {
    cplx value;
    double est = 0.0;
};

// One Gauss panel plus a truncation estimate read off the trailing Legendre
// coefficients of the sampled values (the integrands here are entire in t and
// phase-capped per subpanel, so coefficient decay is super-geometric and the
// trailing terms bound the unresolved residual).  Costs `order` evaluations —
// no refinement pass is spent when the panel is already converged.
PanelOut panel_eval(LineCtx& ctx, double a, double b) {
    ++ctx.panels;
    const GaussRule& rule = gauss_rule(ctx.order);
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    cplx values[64];
    cplx total = 0.0;
    for (int i = 0; i < ctx.order; ++i) {
        const double t = m + h * rule.nodes[i];
        const cplx v = (*ctx.g)(t);
        values[i] = v;
        ctx.max_tg = std::max(ctx.max_tg, std::fabs(t) * std::abs(v));
        total += rule.weights[i] * v;
    }
    cplx coeffs[64];
    legendre_coeffs_from_nodes(values, ctx.order, coeffs);
    double tail = 0.0;
    for (int n = std::max(ctx.order - 3, 0); n < ctx.order; ++n) tail += std::abs(coeffs[n]);
    PanelOut out;
    out.value = total * h;
    out.est = 2.0 * h * tail;
    return out;
}

cplx adaptive_interval(LineCtx& ctx, double a, double b, double tol, int depth, double& err) {
    const PanelOut p = panel_eval(ctx, a, b);
    if (p.est <= tol || depth >= 26 || ctx.panels > ctx.panel_budget) {
        err += p.est;
        return p.value;
    }
    const double m = 0.5 * (a + b);
    double e1 = 0.0, e2 = 0.0;
    const cplx left = adaptive_interval(ctx, a, m, tol / 2, depth + 1, e1);
    const cplx right = adaptive_interval(ctx, m, b, tol / 2, depth + 1, e2);
    err += e1 + e2;
    return left + right;
}

struct OctaveOut {
    cplx value;
    double err = 0.0;
    double max_tg = 0.0;
};

// Each subpanel is refined against a private panel cap (not the shared
// budget), so its result is self-contained; the slots are then reduced in
// index order.  That makes the octave independent of the worker count.
constexpr long long kSubpanelCap = 4096;

OctaveOut integrate_octave(LineCtx& ctx, double a, double b, double tol, double w_max) {
    OctaveOut out;
    int nsub = 1;
    if (w_max > 0.0 && std::isfinite(w_max))
        nsub = static_cast<int>(std::clamp(std::ceil((b - a) / w_max), 1.0, 2e5));
    const double step = (b - a) / nsub;

    struct Slot {
        cplx value;
        double err = 0.0;
        double max_tg = 0.0;
        long long panels = 0;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(nsub));
    parallel_for(nsub, [&](int i) {
        LineCtx local;
        local.g = ctx.g;
        local.order = ctx.order;
        local.panel_budget = kSubpanelCap;
        const double lo = a + i * step;
        const double hi = (i + 1 == nsub) ? b : a + (i + 1) * step;
        Slot& s = slots[static_cast<std::size_t>(i)];
        s.value = adaptive_interval(local, lo, hi, tol / nsub, 0, s.err);
        s.max_tg = local.max_tg;
        s.panels = local.panels;
    });
    for (const Slot& s : slots) {
        out.value += s.value;
        out.err += s.err;
        out.max_tg = std::max(out.max_tg, s.max_tg);
        ctx.panels += s.panels;
    }
    return out;
}

TailIntegral tail_engine(const std::function<cplx(double)>& g, double t_start,
                         const QuadratureSpec& spec, double osc_scale,
                         const std::function<double(double)>& tail_bound, double s_eff) {
    LineCtx ctx;
    ctx.g = &g;
    ctx.order = std::clamp(spec.panel_order, 4, max_gauss_order());
    ctx.panel_budget = spec.max_panels;
    // Phase cap ~order/2 radians per subpanel: the trailing-coefficient
    // estimate in panel_eval is then decisively below the value it certifies.
    const double w_max =
        osc_scale > 0.0 ? (2.0 * std::numbers::pi / osc_scale) * (ctx.order / 12.0)
                        : std::numeric_limits<double>::infinity();

    TailIntegral out;
    std::vector<double> osum, omax;
    cplx value = 0.0;
    double err = 0.0;
    bool stopped = false;
    // Octave cap: generous because heavy-tailed laws push t0 far below the
    // certification range (each early octave costs only a few evaluations).
    for (int k = 0; k < 2000 && !stopped; ++k) {
        const double a = t_start * std::ldexp(1.0, k);
        const double b = 2.0 * a;
        if (!std::isfinite(b)) break;
        const double tol_here =
            0.25 * std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
        const OctaveOut oct = integrate_octave(ctx, a, b, std::max(tol_here, 1e-300), w_max);
        value += oct.value;
        err += oct.err;
        out.t_reached = b;
        osum.push_back(std::abs(oct.value));
        omax.push_back(oct.max_tg);
        const std::size_t n = osum.size();
        const double tol_stop = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));

        double bound = std::numeric_limits<double>::infinity();
        if (tail_bound) bound = std::min(bound, tail_bound(b));
        if (n >= 6) {
            // Paired octave sums absorb oscillation of individual octaves.
            const double e0 = osum[n - 1] + osum[n - 2];
            const double e2 = osum[n - 3] + osum[n - 4];
            const double e4 = osum[n - 5] + osum[n - 6];
            if (e2 > 0.0 && e4 > 0.0 && e0 <= 0.8 * e2 && e2 <= 0.8 * e4) {
                const double r = std::max(e0 / e2, e2 / e4);
                bound = std::min(bound, 2.0 * e0 * r / (1.0 - r));
            }
            // Envelope of |t·g|: tail ≤ sum of octave maxima × ln 2.
            const double m0 = omax[n - 1], m2 = omax[n - 3], m4 = omax[n - 5];
            if (m2 > 0.0 && m4 > 0.0 && m0 <= 0.85 * m2 && m2 <= 0.85 * m4) {
                const double r2 = std::max(m0 / m2, m2 / m4);
                const double r = std::sqrt(r2);
                bound = std::min(bound, 2.0 * std::numbers::ln2 * m0 * r / (1.0 - r));
            }
            // Integration by parts against e^{-jts}: one boundary term plus
            // same-order corrections, valid while the envelope decays.
            if (s_eff > 0.0 && m0 <= 0.95 * m2 && m2 <= 0.95 * m4)
                bound = std::min(bound, 4.0 * m0 / (s_eff * b));
            // Identically vanishing integrand.
            if (m0 <= 1e-300 && m2 <= 1e-300 && m4 <= 1e-300) bound = std::min(bound, 0.0);
        }
        if (bound <= 0.5 * tol_stop) {
            err += bound;
            out.certified = true;
            stopped = true;
        } else if (n >= 10) {
            const double e0 = osum[n - 1] + osum[n - 2];
            const double e2 = osum[n - 3] + osum[n - 4];
            const double m0 = omax[n - 1], m4 = omax[n - 5];
            if (e0 >= 0.9 * e2 && m0 >= 0.9 * m4 && ctx.panels > spec.max_panels / 4) {
                out.plateaued = true;  // no decay in sight; let the caller damp
                break;
            }
        }
        if (ctx.panels > ctx.panel_budget) break;
    }
    out.value = value;
    out.error_bound = err;
    if (!stopped) {
        out.certified = false;
        // Budget/plateau exit: keep the reported bound honest by charging the
        // best still-valid truncation estimate (the caller's, if supplied).
        if (tail_bound && out.t_reached > 0.0) out.error_bound += tail_bound(out.t_reached);
    }
    return out;
}

}  // namespace

TailIntegral oscillatory_tail_integral(const std::function<cplx(double)>& g, double t0,
                                       const QuadratureSpec& spec, double osc_scale,
                                       const std::function<double(double)>& tail_bound) {
    double start = t0;
    cplx head = 0.0;
    double head_err = 0.0;
    if (start <= 0.0) {
        // Finite leading piece [t0, start] handled as one adaptive panel.
        LineCtx ctx;
        ctx.g = &g;
        ctx.order = std::clamp(spec.panel_order, 4, max_gauss_order());
        ctx.panel_budget = spec.max_panels;
        start = 0.0625 / (1.0 + osc_scale);
        head = adaptive_interval(ctx, t0, start, spec.abs_tol * 0.1, 0, head_err);
    }
    TailIntegral out = tail_engine(g, start, spec, osc_scale, tail_bound, 0.0);
    out.value += head;
    out.error_bound += head_err;
    return out;
}

CdfResult gil_pelaez_cdf(const std::function<cplx(double)>& cf, double s,
                         const GilPelaezOptions& options) {
    const QuadratureSpec& qs = options.quad;
    double osc = std::fabs(s) + options.osc_scale;
    if (osc <= 0.0) osc = 1.0;
    const double sigma_d = options.damping_sigma;

    const auto phi = [&](double t) -> cplx {
        cplx v = cf(t);
        if (sigma_d > 0.0) v *= std::exp(-0.5 * sigma_d * sigma_d * t * t);
        return v;
    };
    const auto integrand = [&](double t) -> cplx {
        const cplx rot = std::exp(cplx(0.0, -s * t));
        return cplx(std::imag(rot * phi(t)) / t, 0.0);
    };

    const bool have_mean = !std::isnan(options.mean);
    double t0 = options.t_floor;
    if (t0 <= 0.0) t0 = std::ldexp(1.0, have_mean ? -12 : -28) / osc;

    // [0, t0] stub: the integrand has the finite limit mean − s at t → 0.
    // With a mean, a Simpson step whose error is measured against the
    // trapezoid; without one, a midpoint step measured by Richardson.
    double stub, stub_err;
    if (have_mean) {
        const double g0 = options.mean - s;
        const double gm = std::real(integrand(0.5 * t0));
        const double g1 = std::real(integrand(t0));
        stub = t0 * (g0 + 4.0 * gm + g1) / 6.0;
        stub_err = std::fabs(stub - 0.5 * (g0 + g1) * t0) + 1e-18;
    } else {
        const double coarse = std::real(integrand(0.5 * t0)) * t0;
        stub = 0.5 * t0 * (std::real(integrand(0.25 * t0)) + std::real(integrand(0.75 * t0)));
        stub_err = std::fabs(stub - coarse) + 1e-18;
    }

    QuadratureSpec eng = qs;
    eng.abs_tol = qs.abs_tol * std::numbers::pi;
    TailIntegral ti = tail_engine(integrand, t0, eng, osc, options.tail_bound, std::fabs(s));

    if (!ti.certified && options.auto_damp && sigma_d == 0.0) {
        // Non-decaying characteristic function: evaluate the law smoothed by
        // a small Gaussian at two widths; their gap measures the bias.
        const double sd = 6.0 / std::max(ti.t_reached, 1.0 / osc);
        GilPelaezOptions damped = options;
        damped.auto_damp = false;
        damped.damping_sigma = sd;
        const CdfResult r1 = gil_pelaez_cdf(cf, s, damped);
        damped.damping_sigma = 0.5 * sd;
        const CdfResult r2 = gil_pelaez_cdf(cf, s, damped);
        CdfResult out;
        out.value = r2.value;
        const double gap = std::fabs(r1.value - r2.value);
        out.uncertainty = r2.uncertainty + 2.0 * gap;
        out.certified = r1.certified && r2.certified &&
                        out.uncertainty <= std::max(qs.abs_tol, qs.rel_tol * r2.value) * 4.0;
        return out;
    }

    const double raw = 0.5 - (stub + std::real(ti.value)) / std::numbers::pi;
    CdfResult out;
    out.value = std::clamp(raw, 0.0, 1.0);
    out.uncertainty = (stub_err + ti.error_bound) / std::numbers::pi;
    out.certified =
        ti.certified &&
        out.uncertainty <= std::max(qs.abs_tol, qs.rel_tol * std::max(out.value, 1e-6)) * 1.5;
    return out;
}

CdfResult gil_pelaez_cdf(const std::function<cplx(double)>& cf, double s,
                         const QuadratureSpec& spec) {
    GilPelaezOptions options;
    options.quad = spec;
    return gil_pelaez_cdf(cf, s, options);
}

}  // namespace attocell
