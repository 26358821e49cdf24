#include "attocell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace attocell {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

// Area of {(u,v): u^2+v^2 <= r^2} ∩ [0,x]×[0,y] for x,y >= 0.
double quarter_disk_box_area(double r, double x, double y) {
    if (r <= 0.0 || x <= 0.0 || y <= 0.0) return 0.0;
    x = std::min(x, r);
    y = std::min(y, r);
    if (x * x + y * y <= r * r) return x * y;
    // The circle crosses the box: flat part at height y up to u1, circular
    // part from u1 to x, with u1 the abscissa where the circle meets v = y.
    const double u1 = std::sqrt(std::max(r * r - y * y, 0.0));
    auto circ = [r](double u) {
        return 0.5 * (u * std::sqrt(std::max(r * r - u * u, 0.0)) +
                      r * r * std::asin(clamp_unit(u / r)));
    };
    return y * u1 + circ(x) - circ(u1);
}

// Signed quadrant primitive: area of the disk over the rectangle spanned by
// the origin and (x, y), with sign sgn(x)*sgn(y).
double signed_quadrant(double r, double x, double y) {
    const double s = (x < 0.0 ? -1.0 : 1.0) * (y < 0.0 ? -1.0 : 1.0);
    return s * quarter_disk_box_area(r, std::fabs(x), std::fabs(y));
}

// Intersect two unions of sorted, non-wrapping angular intervals.
std::vector<std::pair<double, double>> intersect_intervals(
    const std::vector<std::pair<double, double>>& a,
    const std::vector<std::pair<double, double>>& b) {
    std::vector<std::pair<double, double>> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].first, b[j].first);
        const double hi = std::min(a[i].second, b[j].second);
        if (hi > lo) out.emplace_back(lo, hi);
        if (a[i].second < b[j].second)
            ++i;
        else
            ++j;
    }
    return out;
}

// Normalize a possibly wrapping interval into [0, 2pi) pieces, keeping length.
void push_normalized(std::vector<std::pair<double, double>>& out, double lo, double hi) {
    if (hi <= lo) return;
    const double span = std::min(hi - lo, kTwoPi);
    lo = std::fmod(lo, kTwoPi);
    if (lo < 0.0) lo += kTwoPi;
    const double end = lo + span;
    if (end <= kTwoPi) {
        out.emplace_back(lo, end);
    } else {
        out.emplace_back(lo, kTwoPi);
        out.emplace_back(0.0, end - kTwoPi);
    }
}

std::vector<std::pair<double, double>> sort_merge(std::vector<std::pair<double, double>> v) {
    std::sort(v.begin(), v.end());
    std::vector<std::pair<double, double>> out;
    for (auto& iv : v) {
        if (!out.empty() && iv.first <= out.back().second) {
            out.back().second = std::max(out.back().second, iv.second);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

// {phi: cos(phi) in [u1, u2]} as normalized intervals.
std::vector<std::pair<double, double>> cos_band(double u1, double u2) {
    std::vector<std::pair<double, double>> out;
    if (u1 > 1.0 || u2 < -1.0 || u2 < u1) return out;
    const double a = std::acos(clamp_unit(u2));  // in [0, pi]
    const double b = std::acos(clamp_unit(u1));
    push_normalized(out, a, b);
    push_normalized(out, kTwoPi - b, kTwoPi - a);
    return sort_merge(std::move(out));
}

// {phi: sin(phi) in [v1, v2]} as normalized intervals.
std::vector<std::pair<double, double>> sin_band(double v1, double v2) {
    std::vector<std::pair<double, double>> out;
    if (v1 > 1.0 || v2 < -1.0 || v2 < v1) return out;
    const double a = std::asin(clamp_unit(v1));  // in [-pi/2, pi/2]
    const double b = std::asin(clamp_unit(v2));
    push_normalized(out, a, b);                      // right half
    push_normalized(out, std::numbers::pi - b, std::numbers::pi - a);  // left half
    return sort_merge(std::move(out));
}

}  // namespace

double Vec2::norm() const { return std::hypot(x, y); }

bool Square::contains(Vec2 p) const {
    return std::max(std::fabs(p.x - center.x), std::fabs(p.y - center.y)) <= half_side;
}

bool Region::contains(Vec2 p) const {
    if (clip && !clip->contains(p)) return false;
    for (const auto& s : squares)
        if (s.contains(p)) return true;
    return false;
}

RingOffsets ring_offsets(int k, double a) {
    if (k < 0) throw std::invalid_argument("ring_offsets: order must be >= 0");
    if (!(a > 0.0)) throw std::invalid_argument("ring_offsets: half side must be > 0");
    RingOffsets r;
    r.order = k;
    if (k == 0) {
        r.offsets.push_back({0.0, 0.0});
        return r;
    }
    const double step = 2.0 * a;
    for (int i = -k; i <= k; ++i) {
        const int jmag = k - std::abs(i);
        if (jmag == 0) {
            r.offsets.push_back({step * i, 0.0});
        } else {
            r.offsets.push_back({step * i, -step * jmag});
            r.offsets.push_back({step * i, step * jmag});
        }
    }
    return r;
}

Region ring_region(int k, Vec2 user, double a) {
    if (std::fabs(user.x) > a || std::fabs(user.y) > a)
        throw std::invalid_argument("ring_region: user location outside the room");
    Region region;
    for (const auto& off : ring_offsets(k, a).offsets)
        region.squares.push_back({off - user, a});
    return region;
}

std::optional<double> signal_radius(int k, double tau, double sigma2, double eta,
                                    double beta, double h) {
    if (k < 0) throw std::invalid_argument("signal_radius: order must be >= 0");
    if (!(tau >= 1.0))
        throw std::invalid_argument("signal_radius: threshold below model validity (tau >= 1)");
    if (sigma2 < 0.0) throw std::invalid_argument("signal_radius: negative noise");
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("signal_radius: eta outside [0,1]");
    if (!(beta > 0.0)) throw std::invalid_argument("signal_radius: beta must be > 0");
    if (h < 0.0) throw std::invalid_argument("signal_radius: negative height");
    if (sigma2 == 0.0) {
        if (k >= 1 && eta == 0.0) return std::nullopt;  // order-k path carries no power
        return std::numeric_limits<double>::infinity();
    }
    const double bracket =
        std::pow(eta, static_cast<double>(k) / beta) * std::pow(tau * sigma2, -1.0 / beta) -
        h * h;
    if (bracket <= 0.0) return std::nullopt;
    return std::sqrt(bracket);
}

double disk_box_area(double radius, double xlo, double xhi, double ylo, double yhi) {
    if (radius <= 0.0 || xhi <= xlo || yhi <= ylo) return 0.0;
    return signed_quadrant(radius, xhi, yhi) - signed_quadrant(radius, xlo, yhi) -
           signed_quadrant(radius, xhi, ylo) + signed_quadrant(radius, xlo, ylo);
}

double area(const Region& region, double /*tol*/) {
    double total = 0.0;
    for (const auto& s : region.squares) {
        if (!region.clip) {
            total += s.area();
            continue;
        }
        if (region.clip->radius <= 0.0) continue;
        const Vec2 c = region.clip->center;
        total += disk_box_area(region.clip->radius, s.xlo() - c.x, s.xhi() - c.x,
                               s.ylo() - c.y, s.yhi() - c.y);
    }
    return total;
}

std::vector<std::pair<double, double>> circle_box_arcs(double r, double xlo, double xhi,
                                                       double ylo, double yhi) {
    std::vector<std::pair<double, double>> empty;
    if (r <= 0.0 || xhi <= xlo || yhi <= ylo) return empty;
    return intersect_intervals(cos_band(xlo / r, xhi / r), sin_band(ylo / r, yhi / r));
}

double circle_box_arc_measure(double r, double xlo, double xhi, double ylo, double yhi) {
    double total = 0.0;
    for (const auto& [lo, hi] : circle_box_arcs(r, xlo, xhi, ylo, yhi)) total += hi - lo;
    return total;
}

}  // namespace attocell
