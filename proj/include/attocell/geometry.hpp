#pragma once

#include <optional>
#include <vector>

// Planar geometry for indoor attocell coverage: the room floor, the lattice of
// wall-reflection image squares (rings), disk clipping by the maximum useful
// signal radius, and exact areas of clipped square unions.
//
// Conventions: squares are axis-aligned and closed; disks are closed; all
// lengths are in metres. Measure-zero overlaps between adjacent ring squares
// are irrelevant to integrals; point queries resolve them by "lowest ring
// order wins".

namespace attocell {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double c, Vec2 v) { return {c * v.x, c * v.y}; }
    constexpr double norm2() const { return x * x + y * y; }
    double norm() const;
};

// Axis-aligned square given by its center and half side length.
struct Square {
    Vec2 center;
    double half_side = 0.0;  // invariant: > 0

    double xlo() const { return center.x - half_side; }
    double xhi() const { return center.x + half_side; }
    double ylo() const { return center.y - half_side; }
    double yhi() const { return center.y + half_side; }
    bool contains(Vec2 p) const;
    double area() const { return 4.0 * half_side * half_side; }
};

struct Disk {
    Vec2 center;
    double radius = 0.0;  // invariant: >= 0

    bool contains(Vec2 p) const { return (p - center).norm2() <= radius * radius; }
};

// Offsets of the image squares of reflection order k: 2a*(i,j) over integer
// (i,j) with |i|+|j| = k. Order 0 is the room itself, offset (0,0); order
// k >= 1 has exactly 4k offsets.
struct RingOffsets {
    int order = 0;
    std::vector<Vec2> offsets;
};

// Union of pairwise interior-disjoint squares, optionally clipped by a disk.
// Membership: inside some square AND inside the clip disk when present.
struct Region {
    std::vector<Square> squares;
    std::optional<Disk> clip;

    bool contains(Vec2 p) const;
};

// All image-square offsets of order k for a room of half side a, in a fixed
// deterministic order (ascending lattice i, then j).
RingOffsets ring_offsets(int k, double a);

// Ring k translated so the user sits at the origin: squares centered at
// (offset - user) with half side a, unclipped. Rejects users outside the room.
Region ring_region(int k, Vec2 user, double a);

// Maximum horizontal distance at which an order-k transmitter can still beat
// noise at SINR threshold tau: [eta^{k/beta} (tau sigma2)^{-1/beta} - h^2]^{1/2}.
// Returns nullopt ("empty") when the bracket is non-positive, and +infinity
// when sigma2 == 0 (no noise: every distance qualifies). Requires tau >= 1.
std::optional<double> signal_radius(int k, double tau, double sigma2, double eta,
                                    double beta, double h);

// Area of (union of squares) ∩ clip disk. Closed form (signed quadrant
// decomposition of each square against the disk); `tol` is accepted for
// interface stability but the result is exact up to rounding.
double area(const Region& region, double tol = 1e-12);

// Area of the intersection of an axis-aligned box with a disk centered at the
// origin. Continuous through all tangency configurations.
double disk_box_area(double radius, double xlo, double xhi, double ylo, double yhi);

// Angular intervals {phi in [0,2pi)} for which the point r*(cos phi, sin phi)
// lies inside the box; disjoint, sorted, non-wrapping. Used by the radial
// quadrature reduction.
std::vector<std::pair<double, double>> circle_box_arcs(double r, double xlo, double xhi,
                                                       double ylo, double yhi);

// Total angular measure of circle_box_arcs.
double circle_box_arc_measure(double r, double xlo, double xhi, double ylo, double yhi);

}  // namespace attocell
