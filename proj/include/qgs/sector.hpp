#pragma once

#include <vector>

#include "qgs/common.hpp"

namespace qgs {

// Closed sector {r e^{i phi} : r >= 0, |phi - bisector| <= half_angle}.
struct Sector {
    double bisector_angle = kPi;  // radians, normalized to [0, 2pi)
    double half_angle = 0.0;      // radians, [0, pi)

    static Sector from_degrees(double bisector_deg, double half_angle_deg);

    // Exact angular membership; the origin belongs to every closed sector.
    bool contains(cplx z) const;
    // Does the closed ray direction * [0, inf) meet the sector outside the origin?
    bool meets_ray(cplx direction) const;
    cplx bisector_unit() const { return std::polar(1.0, bisector_angle); }
};

// Open angular sector {r e^{i phi} : r > 0, low < phi < high}, high - low in (0, 2pi].
struct OpenSector {
    double angle_low = 0.0;
    double angle_high = kTwoPi;

    double width() const { return angle_high - angle_low; }
    double bisector_angle() const { return 0.5 * (angle_low + angle_high); }
    cplx bisector_unit() const { return std::polar(1.0, bisector_angle()); }

    // Strict angular membership of z != 0, with angular margin `tol`.
    bool contains(cplx z, double tol = 0.0) const;
    // Is direction strictly inside the open angular range?
    bool contains_direction(cplx direction, double tol = 0.0) const;

    // `count` points strictly inside: angles spread over the open range,
    // radii cycling through a fixed set of decades.
    std::vector<cplx> interior_samples(int count) const;
};

}  // namespace qgs
