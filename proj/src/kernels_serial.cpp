#include "ptnls/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace ptnls::kernels::serial {

GridSums grid_sums(std::span<const cplx> p, std::span<const cplx> q, double dr) {
    GridSums s;
    const std::size_t n = p.size();
    const double inv_dr2 = 1.0 / (dr * dr);
    for (std::size_t i = 0; i <= n; ++i) {
        const cplx pl = i == 0 ? cplx{} : p[i - 1];
        const cplx ql = i == 0 ? cplx{} : q[i - 1];
        const cplx pr = i == n ? cplx{} : p[i];
        const cplx qr = i == n ? cplx{} : q[i];
        s.gradU += std::norm(pr - pl) * inv_dr2;
        s.gradV += std::norm(qr - ql) * inv_dr2;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double r = static_cast<double>(i + 1) * dr;
        const double pu = std::norm(p[i]);
        const double pv = std::norm(q[i]);
        const cplx c = p[i] * std::conj(q[i]);
        s.normU += pu;
        s.normV += pv;
        s.crossRe += c.real();
        s.crossIm += c.imag();
        s.quarticU += pu * pu / (r * r);
        s.quarticV += pv * pv / (r * r);
        s.crossQuartic += pu * pv / (r * r);
        s.momentU += r * r * pu;
        s.momentV += r * r * pv;
        const cplx pn = i + 1 < n ? p[i + 1] : cplx{};
        const cplx pp = i > 0 ? p[i - 1] : cplx{};
        const cplx qn = i + 1 < n ? q[i + 1] : cplx{};
        const cplx qp = i > 0 ? q[i - 1] : cplx{};
        s.fluxU += r * (p[i] * std::conj((pn - pp) / (2.0 * dr))).imag();
        s.fluxV += r * (q[i] * std::conj((qn - qp) / (2.0 * dr))).imag();
        s.peakU2 = std::max(s.peakU2, pu / (r * r));
        s.peakV2 = std::max(s.peakV2, pv / (r * r));
    }
    return s;
}

void explicit_half(std::span<const cplx> w, std::span<const cplx> z, std::span<const double> pot,
                   const HalfStepCoeffs& c, std::span<cplx> out) {
    const std::size_t n = w.size();
    const cplx I(0.0, 1.0);
    const double lap = c.h / (c.dr * c.dr);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx wl = i > 0 ? w[i - 1] : cplx{};
        const cplx wr = i + 1 < n ? w[i + 1] : cplx{};
        out[i] = w[i] + I * lap * (wr - 2.0 * w[i] + wl) + c.h * c.sigmaGamma * w[i] +
                 I * c.h * pot[i] * w[i] - I * c.h * c.kappa * z[i];
    }
}

void potential(std::span<const cplx> w, std::span<const cplx> z, double a, double b, double dr,
               std::span<double> pot) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double r = static_cast<double>(i + 1) * dr;
        pot[i] = (a * std::norm(w[i]) + b * std::norm(z[i])) / (r * r);
    }
}

double max_abs_over_r(std::span<const cplx> w, double dr) {
    double m = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        m = std::max(m, std::abs(w[i]) / (static_cast<double>(i + 1) * dr));
    return m;
}

} // namespace ptnls::kernels::serial
