#include "attocell/radial.hpp"

#include "attocell/filon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace attocell {

namespace {

// Distance from the origin to the nearest point of a square.
double square_min_dist(const Square& s) {
    const double dx = std::max({s.xlo(), -s.xhi(), 0.0});
    const double dy = std::max({s.ylo(), -s.yhi(), 0.0});
    return std::hypot(dx, dy);
}

double square_max_dist(const Square& s) {
    const double dx = std::max(std::fabs(s.xlo()), std::fabs(s.xhi()));
    const double dy = std::max(std::fabs(s.ylo()), std::fabs(s.yhi()));
    return std::hypot(dx, dy);
}

struct PanelRef {
    double err;
    std::size_t index;
    bool operator<(const PanelRef& o) const { return err < o.err; }
};

}  // namespace

RadialProfile RadialProfile::build(const Region& region, double h, double beta,
                                   const ProfileSpec& spec) {
    if (!(beta > 0.0)) throw std::invalid_argument("RadialProfile: beta must be > 0");
    if (h < 0.0) throw std::invalid_argument("RadialProfile: height must be >= 0");
    if (spec.panel_order < 4 || spec.panel_order + 8 > max_gauss_order())
        throw std::invalid_argument("RadialProfile: panel_order out of range");

    RadialProfile profile;
    profile.order_ = spec.panel_order;
    if (region.squares.empty()) return profile;
    if (region.clip) {
        if (region.clip->center.norm() > 1e-9 * std::max(1.0, region.clip->radius))
            throw std::invalid_argument("RadialProfile: clip disk must be origin-centered");
        if (region.clip->radius <= 0.0) return profile;
    }

    // Radial breakpoints: every distance at which the circle/region overlap
    // pattern can lose smoothness.
    double r_lo = std::numeric_limits<double>::infinity();
    double r_hi = 0.0;
    std::vector<double> breaks;
    for (const auto& s : region.squares) {
        r_lo = std::min(r_lo, square_min_dist(s));
        r_hi = std::max(r_hi, square_max_dist(s));
        const double xs[2] = {s.xlo(), s.xhi()};
        const double ys[2] = {s.ylo(), s.yhi()};
        for (const double xe : xs)
            for (const double ye : ys) breaks.push_back(std::hypot(xe, ye));
        // Perpendicular feet: tangency radii where an edge is grazed.
        for (const double xe : xs)
            if (s.ylo() <= 0.0 && 0.0 <= s.yhi()) breaks.push_back(std::fabs(xe));
        for (const double ye : ys)
            if (s.xlo() <= 0.0 && 0.0 <= s.xhi()) breaks.push_back(std::fabs(ye));
    }
    if (region.clip) {
        r_hi = std::min(r_hi, region.clip->radius);
        breaks.push_back(region.clip->radius);
    }
    if (!(r_hi > r_lo)) return profile;

    if (h == 0.0 && r_lo == 0.0) {
        // The kernel is unbounded at coincidence.  Below the first positive
        // breakpoint the circle/region overlap is a fixed angular sector, so
        // the weight there is exactly theta * u^(-1-1/beta) / (2 beta); store
        // that tail analytically and start the numeric panels at its edge.
        double first_break = r_hi;
        for (const double b : breaks)
            if (b > 1e-12 * r_hi && b < first_break) first_break = b;
        const double r_cut = 0.5 * first_break;
        double angle = 0.0;
        for (const auto& s : region.squares)
            angle += circle_box_arc_measure(0.5 * r_cut, s.xlo(), s.xhi(), s.ylo(), s.yhi());
        profile.has_tail_ = true;
        profile.tail_coeff_ = angle / (2.0 * beta);
        profile.tail_cut_u_ = std::pow(r_cut, -2.0 * beta);
        profile.tail_nu_ = 1.0 + 1.0 / beta;
        profile.tail_scale_ = std::pow(profile.tail_cut_u_, -1.0 / beta);  // = r_cut^2
        r_lo = r_cut;
    }

    breaks.push_back(r_lo);
    breaks.push_back(r_hi);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> radii;
    for (double r : breaks) {
        if (r < r_lo - 1e-12 * r_hi || r > r_hi + 1e-12 * r_hi) continue;
        r = std::clamp(r, r_lo, r_hi);
        if (radii.empty() || r - radii.back() > 1e-12 * r_hi) radii.push_back(r);
    }
    if (radii.size() < 2) return profile;

    // Map to u space (descending in r -> ascending in u), then fill long
    // gaps geometrically so no panel spans more than one octave.
    auto u_of_r = [&](double r) { return std::pow(r * r + h * h, -beta); };
    std::vector<double> grid;
    for (auto it = radii.rbegin(); it != radii.rend(); ++it) grid.push_back(u_of_r(*it));
    std::vector<double> edges;
    edges.push_back(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double lo = grid[i - 1], hi = grid[i];
        if (!(hi > lo)) continue;
        const double ratio = hi / lo;
        const int nsub = std::max(1, static_cast<int>(std::ceil(std::log2(ratio))));
        for (int j = 1; j <= nsub; ++j)
            edges.push_back(lo * std::pow(ratio, static_cast<double>(j) / nsub));
    }

    auto weight = [&](double u) {
        const double rr = std::pow(u, -1.0 / beta) - h * h;
        const double r = std::sqrt(std::max(rr, 0.0));
        double arc = 0.0;
        for (const auto& s : region.squares)
            arc += circle_box_arc_measure(r, s.xlo(), s.xhi(), s.ylo(), s.yhi());
        return arc * std::pow(u, -1.0 - 1.0 / beta) / (2.0 * beta);
    };

    const int p = spec.panel_order;
    auto make_panel = [&](double lo, double hi) {
        Panel panel;
        panel.lo = lo;
        panel.width = hi - lo;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * panel.width;
        panel.coeffs = legendre_coeffs([&](double x) { return weight(mid + half * x); }, p);
        const double tail = std::fabs(panel.coeffs[static_cast<std::size_t>(p) - 2]) +
                            std::fabs(panel.coeffs[static_cast<std::size_t>(p) - 1]);
        panel.err = panel.width * tail * p;
        return panel;
    };

    auto& panels = profile.panels_;
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i] > edges[i - 1]) panels.push_back(make_panel(edges[i - 1], edges[i]));
    }
    if (panels.empty()) return profile;

    std::priority_queue<PanelRef> queue;
    double total_err = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        total_err += panels[i].err;
        ref += panels[i].width * std::fabs(panels[i].coeffs[0]);
        queue.push({panels[i].err, i});
    }
    const double u_span = edges.back() - edges.front();
    const double width_floor = 1e-13 * u_span;

    while (!queue.empty() && static_cast<int>(panels.size()) < spec.max_panels) {
        if (total_err <= spec.rel_tol * std::max(ref, 1e-300)) break;
        const PanelRef top = queue.top();
        queue.pop();
        Panel& panel = panels[top.index];
        if (top.err != panel.err) continue;  // stale queue entry
        if (panel.width <= width_floor) continue;  // frozen; err stays in budget
        const double lo = panel.lo;
        const double hi = panel.lo + panel.width;
        const double mid = std::sqrt(lo * hi);  // geometric split suits the decades-wide span
        total_err -= panel.err;
        ref -= panel.width * std::fabs(panel.coeffs[0]);
        Panel left = make_panel(lo, mid);
        Panel right = make_panel(mid, hi);
        panel = left;
        panels.push_back(right);
        total_err += left.err + right.err;
        ref += left.width * std::fabs(left.coeffs[0]) + right.width * std::fabs(right.coeffs[0]);
        queue.push({panels[top.index].err, top.index});
        queue.push({panels.back().err, panels.size() - 1});
    }
    profile.build_error_ += total_err;
    std::sort(panels.begin(), panels.end(),
              [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    return profile;
}

std::complex<double> RadialProfile::exp_integral(std::complex<double> s) const {
    std::complex<double> total = 0.0;
    std::complex<double> moments[64];
    for (const auto& panel : panels_) {
        const double half = 0.5 * panel.width;
        scaled_exp_moments(s * half, order_ - 1, moments);
        std::complex<double> dot = 0.0;
        for (int n = 0; n < order_; ++n)
            dot += panel.coeffs[static_cast<std::size_t>(n)] * moments[n];
        total += half * std::exp(-s * panel.lo) * dot;
    }
    if (has_tail_)
        total += tail_coeff_ * tail_scale_ * exp_integral_en(tail_nu_, s * tail_cut_u_);
    return total;
}

double RadialProfile::area() const {
    double total = 0.0;
    for (const auto& panel : panels_) total += panel.width * panel.coeffs[0];
    if (has_tail_) total += tail_coeff_ * tail_scale_ / (tail_nu_ - 1.0);
    return total;
}

double RadialProfile::ell_integral() const {
    if (has_tail_) return std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const auto& panel : panels_) {
        const double half = 0.5 * panel.width;
        const double mid = panel.lo + half;
        double v = panel.width * panel.coeffs[0] * mid;
        if (order_ > 1) v += panel.width * half * panel.coeffs[1] / 3.0;
        total += v;
    }
    return total;
}

double RadialProfile::max_u() const {
    return panels_.empty() ? 0.0 : panels_.back().lo + panels_.back().width;
}

double RadialProfile::min_u() const { return panels_.empty() ? 0.0 : panels_.front().lo; }

double RadialProfile::build_error() const { return build_error_; }

double RadialProfile::ibp_constant() const {
    if (panels_.empty()) return 0.0;
    auto coeff_sum = [](const Panel& panel) {
        double s = 0.0;
        for (double c : panel.coeffs) s += std::fabs(c);
        return s;
    };
    // |w| at the two ends bounded by the coefficient sums of the end panels;
    // total variation of each panel's polynomial bounded by sum |c_n| * 2n.
    double tv = 0.0;
    for (const auto& panel : panels_) {
        for (std::size_t n = 1; n < panel.coeffs.size(); ++n)
            tv += std::fabs(panel.coeffs[n]) * 2.0 * static_cast<double>(n);
    }
    double total = coeff_sum(panels_.front()) + coeff_sum(panels_.back()) + tv;
    // Analytic tail: monotone decreasing from w(tail_cut_u), so its endpoint
    // value plus variation is twice that value.
    if (has_tail_) total += 2.0 * tail_coeff_ * tail_scale_ / tail_cut_u_;
    return total;
}

bool RadialProfile::has_tail() const { return has_tail_; }

double RadialProfile::tail_cut_u() const { return tail_cut_u_; }

int RadialProfile::panel_count() const { return static_cast<int>(panels_.size()); }

bool RadialProfile::empty() const { return panels_.empty() && !has_tail_; }

}  // namespace attocell
