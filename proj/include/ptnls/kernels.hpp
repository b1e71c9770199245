#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// ptnls::kernels::serial and an OpenMP version in ptnls::kernels::omp with the
// same signature; tests check them against each other and bench/ times them.

#include "ptnls/model.hpp"

#include <span>

namespace ptnls::kernels {

/// Raw sums over the interior nodes; multiply by dr (and 4 pi) for integrals.
struct GridSums {
    double normU = 0;      // sum |p|^2
    double normV = 0;      // sum |q|^2
    double crossRe = 0;    // sum Re(p conj q)
    double crossIm = 0;    // sum Im(p conj q)
    double gradU = 0;      // sum over n+1 links |p_{j+1} - p_j|^2 / dr^2
    double gradV = 0;
    double quarticU = 0;   // sum |p|^4 / r^2
    double quarticV = 0;
    double crossQuartic = 0; // sum |p|^2 |q|^2 / r^2
    double momentU = 0;    // sum r^2 |p|^2
    double momentV = 0;
    double fluxU = 0;      // sum r Im(p conj(p_r)), centred p_r
    double fluxV = 0;
    double peakU2 = 0;     // max |p|^2 / r^2
    double peakV2 = 0;
};

/// Explicit half of one Crank-Nicolson step for one field w coupled to z:
///   out_j = w_j + i h (w_{j+1} - 2 w_j + w_{j-1}) / dr^2
///           + h sigma gamma w_j + i h pot_j w_j - i h kappa z_j,
/// with h = dt/2, sigma = +1 for the gain field and -1 for the lossy one.
struct HalfStepCoeffs {
    double h = 0;
    double dr = 0;
    double sigmaGamma = 0;
    double kappa = 0;
};

namespace serial {
GridSums grid_sums(std::span<const cplx> p, std::span<const cplx> q, double dr);
void explicit_half(std::span<const cplx> w, std::span<const cplx> z, std::span<const double> pot,
                   const HalfStepCoeffs& c, std::span<cplx> out);
/// pot_j = (a |w_j|^2 + b |z_j|^2) / r_j^2
void potential(std::span<const cplx> w, std::span<const cplx> z, double a, double b, double dr,
               std::span<double> pot);
double max_abs_over_r(std::span<const cplx> w, double dr);
} // namespace serial

namespace omp {
GridSums grid_sums(std::span<const cplx> p, std::span<const cplx> q, double dr);
void explicit_half(std::span<const cplx> w, std::span<const cplx> z, std::span<const double> pot,
                   const HalfStepCoeffs& c, std::span<cplx> out);
void potential(std::span<const cplx> w, std::span<const cplx> z, double a, double b, double dr,
               std::span<double> pot);
double max_abs_over_r(std::span<const cplx> w, double dr);
} // namespace omp

} // namespace ptnls::kernels
