#pragma once

#include <complex>
#include <utility>

namespace ptnls {

using cplx = std::complex<double>;

/// Coefficients of the gain/loss coupled NLS pair
///   i u_t = -Lap u + i gamma u + kappa v - (g1|u|^2 + g|v|^2) u
///   i v_t = -Lap v - i gamma v + kappa u - (g|u|^2 + g2|v|^2) v
struct SystemParams {
    double gamma = 0.5;
    double kappa = 1.0;
    double g1 = 1.0;
    double g2 = 1.0;
    double g = 1.0;
    int dim = 3;

    /// Throws ValidationError unless gamma > 0, kappa > 0, dim >= 1.
    void validate() const;
};

/// Amplitudes (A, B) and widths (a, b) of the two Gaussian inputs.
struct GaussianIC {
    double ampU = 1.0;   // A
    double ampV = 1.0;   // B
    double widthU = 1.0; // a
    double widthV = 1.0; // b

    void validate() const;
};

enum class PhaseLabel { Unbroken, Broken, Exceptional };

const char* to_string(PhaseLabel label);

PhaseLabel classify_phase(const SystemParams& params);

/// Constants of the rotation (U, V) = R(alpha)^{-1} (u, v) that diagonalises
/// the linear part in the unbroken phase.
struct RotationCoefficients {
    double alpha = 0.0;    // principal Arg of -kappa / (omega - i gamma), in (-pi, pi]
    double alphaAlt = 0.0; // arcsin(gamma / kappa), the [0, pi/2) convention
    double omega = 0.0;
    double Gplus = 0.0;
    double Gminus = 0.0;
    cplx Gcoef;
    double Mcoef = 0.0;
    cplx Qcoef;
    cplx Pcoef;
};

/// Throws BrokenPhase unless kappa > gamma.
RotationCoefficients rotation_coefficients(const SystemParams& params);

/// Radial profile of a single normalised Gaussian:
/// amp * pi^{-N/4} width^{-N/2} exp(-r^2 / (2 width^2)).
double gaussian_profile(double amp, double width, int dim, double r);

/// (u0(r), v0(r)); both purely real.
std::pair<cplx, cplx> evaluate_ic(const GaussianIC& ic, const SystemParams& params, double r);

} // namespace ptnls
