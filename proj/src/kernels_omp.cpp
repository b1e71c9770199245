#include "ptnls/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace ptnls::kernels::omp {

GridSums grid_sums(std::span<const cplx> p, std::span<const cplx> q, double dr) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(p.size());
    const double inv_dr2 = 1.0 / (dr * dr);
    double normU = 0, normV = 0, crossRe = 0, crossIm = 0, gradU = 0, gradV = 0;
    double quarticU = 0, quarticV = 0, crossQuartic = 0, momentU = 0, momentV = 0;
    double fluxU = 0, fluxV = 0, peakU2 = 0, peakV2 = 0;

#pragma omp parallel for reduction(+ : gradU, gradV)
    for (std::ptrdiff_t i = 0; i <= n; ++i) {
        const cplx pl = i == 0 ? cplx{} : p[i - 1];
        const cplx ql = i == 0 ? cplx{} : q[i - 1];
        const cplx pr = i == n ? cplx{} : p[i];
        const cplx qr = i == n ? cplx{} : q[i];
        gradU += std::norm(pr - pl) * inv_dr2;
        gradV += std::norm(qr - ql) * inv_dr2;
    }

#pragma omp parallel for reduction(+ : normU, normV, crossRe, crossIm, quarticU, quarticV,      \
                                       crossQuartic, momentU, momentV, fluxU, fluxV)           \
    reduction(max : peakU2, peakV2)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double r = static_cast<double>(i + 1) * dr;
        const double pu = std::norm(p[i]);
        const double pv = std::norm(q[i]);
        const cplx c = p[i] * std::conj(q[i]);
        normU += pu;
        normV += pv;
        crossRe += c.real();
        crossIm += c.imag();
        quarticU += pu * pu / (r * r);
        quarticV += pv * pv / (r * r);
        crossQuartic += pu * pv / (r * r);
        momentU += r * r * pu;
        momentV += r * r * pv;
        const cplx pn = i + 1 < n ? p[i + 1] : cplx{};
        const cplx pp = i > 0 ? p[i - 1] : cplx{};
        const cplx qn = i + 1 < n ? q[i + 1] : cplx{};
        const cplx qp = i > 0 ? q[i - 1] : cplx{};
        fluxU += r * (p[i] * std::conj((pn - pp) / (2.0 * dr))).imag();
        fluxV += r * (q[i] * std::conj((qn - qp) / (2.0 * dr))).imag();
        peakU2 = std::max(peakU2, pu / (r * r));
        peakV2 = std::max(peakV2, pv / (r * r));
    }

    return GridSums{normU,    normV,    crossRe,      crossIm, gradU, gradV,  quarticU, quarticV,
                    crossQuartic, momentU, momentV, fluxU, fluxV, peakU2, peakV2};
}

void explicit_half(std::span<const cplx> w, std::span<const cplx> z, std::span<const double> pot,
                   const HalfStepCoeffs& c, std::span<cplx> out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(w.size());
    const cplx I(0.0, 1.0);
    const double lap = c.h / (c.dr * c.dr);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const cplx wl = i > 0 ? w[i - 1] : cplx{};
        const cplx wr = i + 1 < n ? w[i + 1] : cplx{};
        out[i] = w[i] + I * lap * (wr - 2.0 * w[i] + wl) + c.h * c.sigmaGamma * w[i] +
                 I * c.h * pot[i] * w[i] - I * c.h * c.kappa * z[i];
    }
}

void potential(std::span<const cplx> w, std::span<const cplx> z, double a, double b, double dr,
               std::span<double> pot) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(w.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double r = static_cast<double>(i + 1) * dr;
        pot[i] = (a * std::norm(w[i]) + b * std::norm(z[i])) / (r * r);
    }
}

double max_abs_over_r(std::span<const cplx> w, double dr) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(w.size());
    double m = 0.0;
#pragma omp parallel for reduction(max : m)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        m = std::max(m, std::abs(w[i]) / (static_cast<double>(i + 1) * dr));
    return m;
}

} // namespace ptnls::kernels::omp
