#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace qgs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorCode {
    EllipticityViolation,
    DimensionMismatch,
    AllZeroParameters,
    OnBackgroundRay,
    InvalidSector,
    InvalidTarget,
    TargetTooLarge,
    VerificationFailed,
    NonpositiveRho,
    RankDeficient,
    SectorHitsBackgroundSpectrum,
    InvalidInput,
    SingularPotentialUnsupported,
    SingularBoundarySystem,
    TooFewSamples,
    ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Numerical thresholds shared by every module. The CLI overrides the
// relevant fields; the defaults are what the library uses otherwise.
struct Tolerances {
    double rank_rel = 1e-10;          // singular values below rank_rel * sigma_max are zero
    double equivalence = 1e-10;       // projector distance for row-space equality
    double angle = 1e-12;             // radians, ray membership
    double eigen_det_rel = 1e-9;      // |det| <= eigen_det_rel * prod max(1, row norm) => eigenvalue
    double smatrix_det_rel = 1e-9;    // |det S| > smatrix_det_rel * prod row norms => certified
    int ellipticity_samples = 2048;
    double ellipticity_zero = 1e-12;
    int samples_per_sector = 25;
    int newton_iterations = 50;
    double newton_residual = 1e-12;
};

// Angle of z in [0, 2pi).
inline double arg_2pi(cplx z) {
    double a = std::arg(z);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a -= kTwoPi;
    return a;
}

// Representative of an angle in (-pi, pi].
inline double wrap_pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    if (a > kPi) a -= kTwoPi;
    return a;
}

inline double normalize_2pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace qgs
