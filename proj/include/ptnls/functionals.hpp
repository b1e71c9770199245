#pragma once

#include "ptnls/grid.hpp"
#include "ptnls/model.hpp"

namespace ptnls {

/// S0 = |u|^2 + |v|^2, S1 = 2 Re(u, v), S2 = 2 Im(u, v), S3 = |u|^2 - |v|^2 (L2 norms).
struct StokesVector {
    double s0 = 0;
    double s1 = 0;
    double s2 = 0;
    double s3 = 0;
};

/// Integral quantities at t = 0 that feed every blowup criterion.
struct InitialFunctionals {
    StokesVector stokes;
    double energy = 0; // E(0)
    double msw = 0;    // X(0)
    double mswRate = 0; // Y(0)
};

struct DiagnosticsSample {
    double t = 0;
    StokesVector stokes;
    double energy = 0;
    double msw = 0;
    double mswRate = 0;
    double gradU2 = 0;
    double gradV2 = 0;
    double quarticU = 0;
    double quarticV = 0;
    double crossQuartic = 0;
    double peakU2 = 0;
    double peakV2 = 0;
    double originU = 0;
    double originV = 0;
};

/// Energy from its pieces; kappa enters through S1.
double assemble_energy(const SystemParams& params, double gradU2, double gradV2, double s1,
                       double quarticU, double quarticV, double crossQuartic);

/// Closed-form functionals of the Gaussian pair in dimension params.dim.
InitialFunctionals gaussian_moments(const GaussianIC& ic, const SystemParams& params);

enum class Backend { Serial, OpenMP };

/// Radial (N = 3) quadrature of every diagnostic for a grid state.
/// Throws GridTooCoarse below 16 interior nodes.
DiagnosticsSample grid_functionals(const RadialState& state, const SystemParams& params,
                                   Backend backend = Backend::OpenMP);

InitialFunctionals to_initial(const DiagnosticsSample& sample);

/// S0(0) e^{2 gamma t}.
double s0_upper_bound(const InitialFunctionals& initial, const SystemParams& params, double t);

} // namespace ptnls
