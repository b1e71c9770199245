#include "ptnls/model.hpp"

#include "ptnls/error.hpp"

#include <cmath>
#include <numbers>

namespace ptnls {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::BrokenPhase: return "BrokenPhase";
    case ErrorKind::RegimeViolation: return "RegimeViolation";
    case ErrorKind::NotManakov: return "NotManakov";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::SolverDiverged: return "SolverDiverged";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

void SystemParams::validate() const {
    if (!(gamma > 0.0)) throw Error(ErrorKind::ValidationError, "params.gamma must be > 0");
    if (!(kappa > 0.0)) throw Error(ErrorKind::ValidationError, "params.kappa must be > 0");
    if (!std::isfinite(g1) || !std::isfinite(g2) || !std::isfinite(g))
        throw Error(ErrorKind::ValidationError, "nonlinear coefficients must be finite");
    if (dim < 1) throw Error(ErrorKind::ValidationError, "params.dim must be >= 1");
}

void GaussianIC::validate() const {
    if (!(ampU > 0.0) || !(ampV > 0.0))
        throw Error(ErrorKind::ValidationError, "ic.A and ic.B must be > 0");
    if (!(widthU > 0.0) || !(widthV > 0.0))
        throw Error(ErrorKind::ValidationError, "ic.a and ic.b must be > 0");
}

const char* to_string(PhaseLabel label) {
    switch (label) {
    case PhaseLabel::Unbroken: return "Unbroken";
    case PhaseLabel::Broken: return "Broken";
    case PhaseLabel::Exceptional: return "Exceptional";
    }
    return "Unknown";
}

PhaseLabel classify_phase(const SystemParams& params) {
    if (params.kappa > params.gamma) return PhaseLabel::Unbroken;
    if (params.gamma > params.kappa) return PhaseLabel::Broken;
    return PhaseLabel::Exceptional;
}

RotationCoefficients rotation_coefficients(const SystemParams& params) {
    const double gamma = params.gamma;
    const double kappa = params.kappa;
    if (!(kappa > gamma))
        throw Error(ErrorKind::BrokenPhase, "rotation requires kappa > gamma");

    RotationCoefficients rc;
    rc.omega = std::sqrt(kappa * kappa - gamma * gamma);
    const cplx phase = -kappa / cplx(rc.omega, -gamma);
    rc.alpha = std::arg(phase);
    rc.alphaAlt = std::asin(gamma / kappa);

    rc.Gplus = 0.5 * (params.g1 + params.g2);
    rc.Gminus = 0.5 * (params.g1 - params.g2);

    const double s = std::sin(rc.alpha);
    const double c = std::cos(rc.alpha);
    const cplx I(0.0, 1.0);
    rc.Gcoef = params.g + rc.Gplus - I * rc.Gminus * std::tan(rc.alpha);
    // Gminus == 0 must give an exact zero, including its sign.
    rc.Mcoef = rc.Gminus == 0.0 ? 0.0 : -rc.Gminus / c;
    rc.Qcoef = -rc.Mcoef + I * params.g * s;
    rc.Pcoef = rc.Mcoef * std::cos(2.0 * rc.alpha) - 2.0 * I * rc.Gplus * s;
    return rc;
}

double gaussian_profile(double amp, double width, int dim, double r) {
    const double n = static_cast<double>(dim);
    return amp * std::pow(std::numbers::pi, -0.25 * n) * std::pow(width, -0.5 * n) *
           std::exp(-r * r / (2.0 * width * width));
}

std::pair<cplx, cplx> evaluate_ic(const GaussianIC& ic, const SystemParams& params, double r) {
    return {cplx(gaussian_profile(ic.ampU, ic.widthU, params.dim, r), 0.0),
            cplx(gaussian_profile(ic.ampV, ic.widthV, params.dim, r), 0.0)};
}

} // namespace ptnls
