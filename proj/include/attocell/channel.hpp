#pragma once

#include "attocell/geometry.hpp"

namespace attocell {

// Static description of one indoor optical-cell deployment.  Lengths are in
// metres, powers in watts, densities in m^-2, the semi-angle in degrees.
// Defaults reproduce the reference configuration used throughout the tests:
// an 18 m x 18 m room, ceiling 3.5 m above the receiver plane, transmitter
// density 0.1 m^-2, -117 dBm receiver noise over a 1 GHz cell bandwidth.
struct NetworkParams {
    double room_half_side = 9.0;     // a: the ceiling spans [-a, a]^2
    double height = 3.5;             // h: vertical drop, ceiling to receiver plane
    double density = 0.1;            // transmitter density
    double user_density = 0.5;       // competing-user density (load model)
    double semi_angle_deg = 60.0;    // LED half-intensity semi-angle
    double pd_area = 0.01;           // photodetector area
    double responsivity = 0.4;       // photodetector responsivity, A/W
    double filter_gain = 1.0;        // optical filter gain
    double concentrator_gain = 2.25; // optical concentrator gain
    double tx_power = 1.0;           // electrical transmit power
    double noise_power = 1.9952623149688826e-15;  // N0*Bf in watts (-117 dBm)
    double bandwidth = 1e9;          // per-cell bandwidth, Hz
    double zeta1 = 1.0;              // rate-law coefficient inside log2
    double zeta2 = 1.0;              // rate-law SINR scaling coefficient
    double reflection_coeff = 0.07;  // eta: per-bounce wall loss, in [0, 1]
    int max_order = 0;               // K: highest reflection order modelled

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Quantities derived once from NetworkParams and reused by every formula.
// All SINR arithmetic runs in normalized units: signal strength is the bare
// path gain l(x, y) and noise is sigma2 on that same scale, so the tiny
// alpha^2 * P_tx factor cancels instead of dragging doubles toward underflow.
// The corollary transforms overwrite sigma2/height on copies of this record;
// everything downstream reads the fields, never re-derives them.
struct ChannelConstants {
    double m;       // Lambertian order, 1 / log2(sec(semi-angle))
    double alpha;   // lumped electro-optical gain
    double beta;    // path-loss exponent, m + 3
    double sigma2;  // noise_power / (alpha^2 * tx_power)
    double height;  // carried through for the distance law
};

// Closed-form arithmetic; rejects semi-angles of 0 or 90 degrees, where the
// Lambertian order is undefined or zero.
ChannelConstants derive_constants(const NetworkParams& params);

// Path gain of the order-k propagation path between ceiling point x (a
// transmitter or one of its wall images) and receiver location y:
//   eta^k * (|x - y|^2 + h^2)^(-beta).
// Returns +infinity when height == 0 and x == y (no-noise limiting analysis
// only; finite everywhere when height > 0).
double pathloss(Vec2 x, Vec2 y, const ChannelConstants& consts, int k, double eta);

// tx_power * alpha^2 * pathloss(...), in watts: the human-readable scale.
// SINR math stays in pathloss/sigma2 units throughout.
double received_power(Vec2 x, Vec2 y, const NetworkParams& params,
                      const ChannelConstants& consts, int k);

// Emission and incidence cosines for a ceiling transmitter facing straight
// down and a receiver facing straight up, separated horizontally by d.
// Both equal h / sqrt(h^2 + d^2); kept as a pair to mirror the two angles.
struct CosinePair {
    double cos_tx;
    double cos_rx;
};

CosinePair cosine_geometry(double d, double h);

}  // namespace attocell
