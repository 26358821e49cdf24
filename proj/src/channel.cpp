#include "attocell/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace attocell {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Exact repeated multiplication: bit-identical across platforms, and k = 1
// attenuation is exactly eta * (k = 0 value).
double pow_int(double base, int n) {
    double acc = 1.0;
    for (int i = 0; i < n; ++i) acc *= base;
    return acc;
}

}  // namespace

void NetworkParams::validate() const {
    require(room_half_side > 0.0, "room_half_side must be > 0");
    require(height > 0.0, "height must be > 0");
    require(density > 0.0, "density must be > 0");
    require(user_density >= 0.0, "user_density must be >= 0");
    require(semi_angle_deg > 0.0 && semi_angle_deg < 90.0,
            "semi_angle_deg must lie strictly between 0 and 90");
    require(pd_area > 0.0, "pd_area must be > 0");
    require(responsivity > 0.0, "responsivity must be > 0");
    require(filter_gain > 0.0, "filter_gain must be > 0");
    require(concentrator_gain > 0.0, "concentrator_gain must be > 0");
    require(tx_power > 0.0, "tx_power must be > 0");
    require(noise_power > 0.0, "noise_power must be > 0");
    require(bandwidth > 0.0, "bandwidth must be > 0");
    require(zeta1 > 0.0, "zeta1 must be > 0");
    require(zeta2 > 0.0, "zeta2 must be > 0");
    require(reflection_coeff >= 0.0 && reflection_coeff <= 1.0,
            "reflection_coeff must lie in [0, 1]");
    require(max_order >= 0, "max_order must be >= 0");
}

ChannelConstants derive_constants(const NetworkParams& params) {
    params.validate();
    const double psi = params.semi_angle_deg * std::numbers::pi / 180.0;
    // m = 1/log2(sec psi); validate() already excluded the degenerate angles.
    const double m = -1.0 / std::log2(std::cos(psi));
    const double alpha = (m + 1.0) * params.pd_area * params.responsivity *
                         params.filter_gain * params.concentrator_gain *
                         std::pow(params.height, m + 1.0) /
                         (2.0 * std::numbers::pi);
    ChannelConstants consts;
    consts.m = m;
    consts.alpha = alpha;
    consts.beta = m + 3.0;
    consts.sigma2 = params.noise_power / (alpha * alpha * params.tx_power);
    consts.height = params.height;
    return consts;
}

double pathloss(Vec2 x, Vec2 y, const ChannelConstants& consts, int k, double eta) {
    require(k >= 0, "reflection order must be >= 0");
    require(eta >= 0.0 && eta <= 1.0, "reflection coefficient must lie in [0, 1]");
    const double d2 = (x - y).norm2() + consts.height * consts.height;
    if (d2 == 0.0) return std::numeric_limits<double>::infinity();
    return pow_int(eta, k) * std::pow(d2, -consts.beta);
}

double received_power(Vec2 x, Vec2 y, const NetworkParams& params,
                      const ChannelConstants& consts, int k) {
    return params.tx_power * consts.alpha * consts.alpha *
           pathloss(x, y, consts, k, params.reflection_coeff);
}

CosinePair cosine_geometry(double d, double h) {
    require(d >= 0.0, "horizontal distance must be >= 0");
    require(h > 0.0, "height must be > 0");
    const double c = h / std::sqrt(h * h + d * d);
    return CosinePair{c, c};
}

}  // namespace attocell
