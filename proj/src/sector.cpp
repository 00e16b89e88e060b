#include "qgs/sector.hpp"

#include <array>
#include <cmath>

namespace qgs {

Sector Sector::from_degrees(double bisector_deg, double half_angle_deg) {
    if (!(half_angle_deg >= 0.0 && half_angle_deg < 180.0))
        throw Error(ErrorCode::InvalidSector, "half angle must lie in [0, 180) degrees");
    Sector s;
    s.bisector_angle = normalize_2pi(bisector_deg * kPi / 180.0);
    s.half_angle = half_angle_deg * kPi / 180.0;
    return s;
}

bool Sector::contains(cplx z) const {
    if (z == cplx(0.0)) return true;
    return std::abs(wrap_pi(std::arg(z) - bisector_angle)) <= half_angle;
}

bool Sector::meets_ray(cplx direction) const {
    if (direction == cplx(0.0)) return true;
    return contains(direction);
}

bool OpenSector::contains(cplx z, double tol) const {
    if (z == cplx(0.0)) return false;
    return contains_direction(z, tol);
}

bool OpenSector::contains_direction(cplx direction, double tol) const {
    double rel = normalize_2pi(std::arg(direction) - angle_low);
    if (width() >= kTwoPi) return rel > tol && rel < kTwoPi - tol;
    return rel > tol && rel < width() - tol;
}

std::vector<cplx> OpenSector::interior_samples(int count) const {
    static constexpr std::array<double, 5> radii{0.1, 1.0, 10.0, 0.5, 3.0};
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double t = (i + 0.5) / count;
        double phi = angle_low + t * width();
        out.push_back(std::polar(radii[static_cast<std::size_t>(i) % radii.size()], phi));
    }
    return out;
}

}  // namespace qgs
