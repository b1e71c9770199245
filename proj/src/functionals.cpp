#include "ptnls/functionals.hpp"

#include "ptnls/error.hpp"
#include "ptnls/kernels.hpp"

#include <cmath>
#include <numbers>

namespace ptnls {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr std::size_t kMinNodes = 16;
} // namespace

double assemble_energy(const SystemParams& params, double gradU2, double gradV2, double s1,
                       double quarticU, double quarticV, double crossQuartic) {
    return gradU2 + gradV2 + params.kappa * s1 - 0.5 * params.g1 * quarticU -
           0.5 * params.g2 * quarticV - params.g * crossQuartic;
}

InitialFunctionals gaussian_moments(const GaussianIC& ic, const SystemParams& params) {
    const double n = static_cast<double>(params.dim);
    const double A = ic.ampU, B = ic.ampV, a = ic.widthU, b = ic.widthV;
    const double A2 = A * A, B2 = B * B, a2 = a * a, b2 = b * b;

    InitialFunctionals f;
    f.stokes.s0 = A2 + B2;
    f.stokes.s1 = 2.0 * A * B * std::pow(2.0 * a * b / (a2 + b2), 0.5 * n);
    f.stokes.s2 = 0.0;
    f.stokes.s3 = A2 - B2;
    f.msw = 0.5 * n * (A2 * a2 + B2 * b2);
    f.mswRate = params.gamma * n * (A2 * a2 - B2 * b2);

    const double gradU = 0.5 * n * A2 / a2;
    const double gradV = 0.5 * n * B2 / b2;
    const double twoPi = 2.0 * std::numbers::pi;
    const double quarticU = A2 * A2 * std::pow(twoPi, -0.5 * n) * std::pow(a, -n);
    const double quarticV = B2 * B2 * std::pow(twoPi, -0.5 * n) * std::pow(b, -n);
    const double cross = A2 * B2 * std::pow(std::numbers::pi * (a2 + b2), -0.5 * n);
    f.energy = assemble_energy(params, gradU, gradV, f.stokes.s1, quarticU, quarticV, cross);
    return f;
}

DiagnosticsSample grid_functionals(const RadialState& state, const SystemParams& params,
                                   Backend backend) {
    const RadialGrid& grid = state.grid;
    if (grid.n < kMinNodes || state.p.size() != grid.n || state.q.size() != grid.n)
        throw Error(ErrorKind::GridTooCoarse, "radial grid needs at least 16 interior nodes");

    const kernels::GridSums s = backend == Backend::Serial
                                    ? kernels::serial::grid_sums(state.p, state.q, grid.dr)
                                    : kernels::omp::grid_sums(state.p, state.q, grid.dr);
    const double w = kFourPi * grid.dr;

    DiagnosticsSample d;
    d.t = state.t;
    const double normU = w * s.normU;
    const double normV = w * s.normV;
    d.stokes = {normU + normV, 2.0 * w * s.crossRe, 2.0 * w * s.crossIm, normU - normV};
    d.gradU2 = w * s.gradU;
    d.gradV2 = w * s.gradV;
    d.quarticU = w * s.quarticU;
    d.quarticV = w * s.quarticV;
    d.crossQuartic = w * s.crossQuartic;
    d.energy = assemble_energy(params, d.gradU2, d.gradV2, d.stokes.s1, d.quarticU, d.quarticV,
                               d.crossQuartic);
    d.msw = w * (s.momentU + s.momentV);
    // x.grad(conj u) = r conj(u_r); with u = p/r the Im part reduces to r Im(p conj p_r).
    d.mswRate = 4.0 * w * (s.fluxU + s.fluxV) +
                2.0 * params.gamma * w * (s.momentU - s.momentV);
    d.peakU2 = s.peakU2;
    d.peakV2 = s.peakV2;
    d.originU = std::abs(state.p.front()) / grid.dr;
    d.originV = std::abs(state.q.front()) / grid.dr;
    return d;
}

InitialFunctionals to_initial(const DiagnosticsSample& sample) {
    return {sample.stokes, sample.energy, sample.msw, sample.mswRate};
}

double s0_upper_bound(const InitialFunctionals& initial, const SystemParams& params, double t) {
    return initial.stokes.s0 * std::exp(2.0 * params.gamma * t);
}

} // namespace ptnls
