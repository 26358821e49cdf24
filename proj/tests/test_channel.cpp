#include "doctest.h"

#include "attocell/channel.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

using namespace attocell;

namespace {

struct TestRng {
    std::uint64_t s;
    explicit TestRng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }
};

}  // namespace

TEST_CASE("derived constants at the default configuration") {
    const NetworkParams params;
    const ChannelConstants c = derive_constants(params);

    CHECK(c.m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.beta == doctest::Approx(4.0).epsilon(1e-12));
    // Direct arithmetic: (m+1) A xi Gf Gc h^{m+1} / (2 pi) with m = 1.
    const double alpha_byhand =
        2.0 * 0.01 * 0.4 * 1.0 * 2.25 * 12.25 / (2.0 * std::numbers::pi);
    CHECK(c.alpha == doctest::Approx(alpha_byhand).epsilon(1e-12));
    CHECK(c.alpha == doctest::Approx(0.03509366495176296).epsilon(1e-12));
    CHECK(c.sigma2 ==
          doctest::Approx(params.noise_power / (c.alpha * c.alpha)).epsilon(1e-14));
    CHECK(c.sigma2 == doctest::Approx(1.6201027123591166e-12).epsilon(1e-12));
    CHECK(c.height == 3.5);
}

TEST_CASE("derived constants: scale laws of the effective noise") {
    NetworkParams params;
    const double base = derive_constants(params).sigma2;
    params.tx_power = 2.0;
    CHECK(derive_constants(params).sigma2 == doctest::Approx(base / 2.0).epsilon(1e-14));
    params.tx_power = 1.0;
    params.noise_power *= 3.0;
    CHECK(derive_constants(params).sigma2 == doctest::Approx(3.0 * base).epsilon(1e-14));
}

TEST_CASE("derived constants: degenerate semi-angles are rejected") {
    NetworkParams params;
    params.semi_angle_deg = 0.0;
    CHECK_THROWS_AS(derive_constants(params), std::invalid_argument);
    params.semi_angle_deg = 90.0;
    CHECK_THROWS_AS(derive_constants(params), std::invalid_argument);
    params.semi_angle_deg = 60.0;
    params.density = 0.0;
    CHECK_THROWS_AS(derive_constants(params), std::invalid_argument);
    params.density = 0.1;
    params.reflection_coeff = 1.5;
    CHECK_THROWS_AS(derive_constants(params), std::invalid_argument);
}

TEST_CASE("pathloss: reference values under the default geometry") {
    const ChannelConstants c = derive_constants(NetworkParams{});
    const Vec2 origin{0.0, 0.0};

    const double l0 = pathloss(origin, origin, c, 0, 0.07);
    CHECK(l0 == doctest::Approx(4.440743054270217e-05).epsilon(1e-13));
    CHECK(l0 == doctest::Approx(std::pow(12.25, -4.0)).epsilon(1e-13));

    // One ceiling-height of horizontal separation doubles the squared
    // distance, so the gain drops by exactly 2^beta = 16.
    const double l35 = pathloss({3.5, 0.0}, origin, c, 0, 0.07);
    CHECK(l35 == doctest::Approx(2.7754644089188855e-06).epsilon(1e-13));
    CHECK(16.0 * l35 == doctest::Approx(l0).epsilon(1e-13));

    // Reflections only attach the per-bounce attenuation factor.
    CHECK(pathloss({3.5, 0.0}, origin, c, 1, 0.07) ==
          doctest::Approx(0.07 * l35).epsilon(1e-15));
    CHECK(pathloss({3.5, 0.0}, origin, c, 2, 0.07) ==
          doctest::Approx(0.07 * 0.07 * l35).epsilon(1e-15));
}

TEST_CASE("pathloss: symmetry, monotonicity, and the length scale law") {
    const ChannelConstants c = derive_constants(NetworkParams{});
    const Vec2 x{1.0, 2.0}, y{3.0, -1.0};
    CHECK(pathloss(x, y, c, 0, 0.07) == pathloss(y, x, c, 0, 0.07));

    double prev = pathloss({0.0, 0.0}, {0.0, 0.0}, c, 0, 0.07);
    for (double d = 0.5; d < 40.0; d += 0.5) {
        const double cur = pathloss({d, 0.0}, {0.0, 0.0}, c, 0, 0.07);
        CHECK(cur < prev);
        prev = cur;
    }

    // All lengths scaled by t multiply the gain by t^{-2 beta}.
    const double t = 1.7;
    ChannelConstants scaled = c;
    scaled.height = t * c.height;
    const double lhs = pathloss({t * x.x, t * x.y}, {t * y.x, t * y.y}, scaled, 0, 0.07);
    const double rhs = std::pow(t, -2.0 * c.beta) * pathloss(x, y, c, 0, 0.07);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("pathloss: zero-height sentinel and input validation") {
    ChannelConstants c = derive_constants(NetworkParams{});
    c.height = 0.0;
    CHECK(std::isinf(pathloss({2.0, 2.0}, {2.0, 2.0}, c, 0, 0.07)));
    CHECK(std::isfinite(pathloss({2.0, 2.0}, {2.0, 3.0}, c, 0, 0.07)));

    const ChannelConstants ok = derive_constants(NetworkParams{});
    CHECK_THROWS_AS(pathloss({0, 0}, {0, 0}, ok, -1, 0.07), std::invalid_argument);
    CHECK_THROWS_AS(pathloss({0, 0}, {0, 0}, ok, 0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(pathloss({0, 0}, {0, 0}, ok, 0, 1.1), std::invalid_argument);
}

TEST_CASE("received power: reporting scale at the cell center") {
    const NetworkParams params;
    const ChannelConstants c = derive_constants(params);
    const double p0 = received_power({0, 0}, {0, 0}, params, c, 0);
    CHECK(p0 == doctest::Approx(5.4690651395447735e-08).epsilon(1e-13));

    NetworkParams doubled = params;
    doubled.tx_power = 2.0;
    CHECK(received_power({0, 0}, {0, 0}, doubled, derive_constants(doubled), 0) ==
          doctest::Approx(2.0 * p0).epsilon(1e-14));

    CHECK(received_power({0, 0}, {0, 0}, params, c, 2) ==
          doctest::Approx(0.07 * 0.07 * p0).epsilon(1e-14));
}

TEST_CASE("cosine geometry: both angles see the same cosine") {
    const auto straight = cosine_geometry(0.0, 3.5);
    CHECK(straight.cos_tx == 1.0);
    CHECK(straight.cos_rx == 1.0);

    const auto diag = cosine_geometry(3.5, 3.5);
    CHECK(diag.cos_tx == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(diag.cos_rx == diag.cos_tx);

    CHECK_THROWS_AS(cosine_geometry(-1.0, 3.5), std::invalid_argument);
    CHECK_THROWS_AS(cosine_geometry(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("cosine form of the gain reproduces the closed-form distance law") {
    TestRng rng(0xd1b54a32d192ed03ULL);
    for (int i = 0; i < 100; ++i) {
        const double d = rng.uniform(0.0, 30.0);
        const double h = rng.uniform(0.5, 5.0);
        NetworkParams params;
        params.height = h;
        const ChannelConstants c = derive_constants(params);

        const auto [cos_tx, cos_rx] = cosine_geometry(d, h);
        const double dist2 = d * d + h * h;
        const double gain_by_angles = (c.m + 1.0) * params.pd_area *
                                      params.responsivity * params.filter_gain *
                                      params.concentrator_gain /
                                      (2.0 * std::numbers::pi * dist2) *
                                      std::pow(cos_tx, c.m) * cos_rx;
        const double gain_closed = c.alpha * std::pow(dist2, -c.beta / 2.0);
        CHECK(gain_by_angles == doctest::Approx(gain_closed).epsilon(1e-10));
    }
}
