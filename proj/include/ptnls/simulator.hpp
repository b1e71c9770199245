#pragma once

#include "ptnls/functionals.hpp"
#include "ptnls/grid.hpp"
#include "ptnls/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace ptnls {

struct RunConfig {
    double dt0 = 1e-4;
    double dtMin = 1e-8;
    double blowupRatio = 100.0;
    /// Once one origin ratio crosses blowupRatio the run continues until the
    /// other one crosses too or the leader reaches followRatio * blowupRatio.
    double followRatio = 2.0;
    double tMax = 5.0;
    std::size_t sampleEvery = 50;
    int cnIterations = 2;
    /// Fixed-point passes continue past cnIterations until the update drops
    /// below this relative size, up to cnMaxIterations.
    double cnTolerance = 1e-13;
    int cnMaxIterations = 40;
    /// Allowed relative change of each field's peak |u| per accepted step.
    double peakChangeLimit = 0.05;
    Backend backend = Backend::OpenMP;

    /// Throws ConfigInvalid.
    void validate() const;
};

enum class Verdict { BlowupLike, Dispersed, MaxTimeReached, SolverDiverged };
enum class Component { U, V, Both, None };

const char* to_string(Verdict v);
const char* to_string(Component c);

struct RunOutcome {
    Verdict verdict = Verdict::MaxTimeReached;
    double tStop = 0;
    double tCross = 0; // first time an origin ratio reached blowupRatio
    Component component = Component::None;
    double ratioU = 1; // |u(0, tStop)| / |u0(0)|
    double ratioV = 1;
    std::size_t steps = 0;
    std::size_t rejectedSteps = 0;
    double dtFinal = 0;
    std::vector<DiagnosticsSample> trace;
};

/// p_j = r_j u0(r_j), q_j = r_j v0(r_j) at t = 0.
RadialState load_initial(const GaussianIC& ic, const RadialGrid& grid);

struct StepResult {
    RadialState state;
    int iterations = 0;
    bool converged = false;
};

/// One Crank-Nicolson step of the reduced radial system
///   i p_t = -p_rr + i gamma p + kappa q - r^{-2}(g1|p|^2 + g|q|^2) p
///   i q_t = -q_rr - i gamma q + kappa p - r^{-2}(g|p|^2 + g2|q|^2) q
/// with time-averaged nonlinear potential and coupling, resolved by fixed-point
/// passes that each solve two complex tridiagonal systems.
/// Throws SolverDiverged on a degenerate solve or non-finite output.
StepResult step(const RadialState& state, const SystemParams& params, double dt,
                const RunConfig& cfg = {});

RunOutcome run(const GaussianIC& ic, const SystemParams& params, const RadialGrid& grid,
               const RunConfig& cfg);

struct ConvergenceLevel {
    double dr = 0;
    double dt0 = 0;
    RunOutcome outcome;
    /// Differences against the previous (coarser) level; empty for level 0.
    std::optional<double> tStopChange;    // |tStop - tStop_prev| / tStop_prev
    std::optional<double> traceDifference; // max relative S0/E/X gap on common times
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> levels;
    bool noAdaptivityHeadroom = false;
    bool verdictStable = true;
    bool converging = true; // successive differences decrease
};

ConvergenceReport convergence_check(const GaussianIC& ic, const SystemParams& params,
                                    const RadialGrid& grid, const RunConfig& cfg,
                                    int refinements);

/// Linear interpolation of a trace column onto time t (clamped at the ends).
double interpolate_trace(const std::vector<DiagnosticsSample>& trace, double t,
                         const std::function<double(const DiagnosticsSample&)>& field);

} // namespace ptnls
