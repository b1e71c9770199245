#include "ptnls/simulator.hpp"

#include "ptnls/error.hpp"
#include "ptnls/kernels.hpp"
#include "ptnls/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

namespace ptnls {

RadialGrid RadialGrid::with_nodes(double L, std::size_t n) {
    if (!(L > 0.0)) throw Error(ErrorKind::ConfigInvalid, "grid length must be > 0");
    if (n < 16) throw Error(ErrorKind::GridTooCoarse, "radial grid needs at least 16 interior nodes");
    return {L, n, L / static_cast<double>(n + 1)};
}

RadialGrid RadialGrid::with_spacing(double L, double dr) {
    if (!(L > 0.0) || !(dr > 0.0) || dr >= L)
        throw Error(ErrorKind::ConfigInvalid, "need 0 < dr < L");
    const auto intervals = static_cast<std::size_t>(std::llround(L / dr));
    return with_nodes(L, intervals < 1 ? 0 : intervals - 1);
}

bool RadialState::all_finite() const {
    auto finite = [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return std::all_of(p.begin(), p.end(), finite) && std::all_of(q.begin(), q.end(), finite);
}

void RunConfig::validate() const {
    if (!(dtMin > 0.0) || !(dt0 > dtMin))
        throw Error(ErrorKind::ConfigInvalid, "need dt0 > dtMin > 0");
    if (!(blowupRatio > 1.0)) throw Error(ErrorKind::ConfigInvalid, "blowupRatio must be > 1");
    if (!(tMax > 0.0)) throw Error(ErrorKind::ConfigInvalid, "tMax must be > 0");
    if (sampleEvery < 1) throw Error(ErrorKind::ConfigInvalid, "sampleEvery must be >= 1");
    if (cnIterations < 1 || cnMaxIterations < cnIterations)
        throw Error(ErrorKind::ConfigInvalid, "need 1 <= cnIterations <= cnMaxIterations");
    if (!(followRatio >= 1.0)) throw Error(ErrorKind::ConfigInvalid, "followRatio must be >= 1");
    if (!(peakChangeLimit > 0.0)) throw Error(ErrorKind::ConfigInvalid, "peakChangeLimit must be > 0");
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::BlowupLike: return "BlowupLike";
    case Verdict::Dispersed: return "Dispersed";
    case Verdict::MaxTimeReached: return "MaxTimeReached";
    case Verdict::SolverDiverged: return "SolverDiverged";
    }
    return "Unknown";
}

const char* to_string(Component c) {
    switch (c) {
    case Component::U: return "U";
    case Component::V: return "V";
    case Component::Both: return "Both";
    case Component::None: return "None";
    }
    return "Unknown";
}

RadialState load_initial(const GaussianIC& ic, const RadialGrid& grid) {
    RadialState s;
    s.grid = grid;
    s.p.resize(grid.n);
    s.q.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double r = grid.r(i);
        s.p[i] = r * gaussian_profile(ic.ampU, ic.widthU, 3, r);
        s.q[i] = r * gaussian_profile(ic.ampV, ic.widthV, 3, r);
    }
    return s;
}

namespace {

struct Workspace {
    std::vector<double> potOld, potNew;
    std::vector<cplx> explicitPart, diag, rhs;
    TridiagonalSolver solver;

    explicit Workspace(std::size_t n)
        : potOld(n), potNew(n), explicitPart(n), diag(n), rhs(n) {}
};

void compute_potential(Backend backend, std::span<const cplx> w, std::span<const cplx> z, double a,
                       double b, double dr, std::span<double> pot) {
    if (backend == Backend::Serial)
        kernels::serial::potential(w, z, a, b, dr, pot);
    else
        kernels::omp::potential(w, z, a, b, dr, pot);
}

void compute_explicit(Backend backend, std::span<const cplx> w, std::span<const cplx> z,
                      std::span<const double> pot, const kernels::HalfStepCoeffs& c,
                      std::span<cplx> out) {
    if (backend == Backend::Serial)
        kernels::serial::explicit_half(w, z, pot, c, out);
    else
        kernels::omp::explicit_half(w, z, pot, c, out);
}

/// Solves (I + i h H_w) w1 = (I - i h H_w) w0 - i h kappa (z0 + z1) for one field.
bool solve_field(Workspace& ws, Backend backend, std::span<const cplx> w0,
                 std::span<const cplx> z0, std::span<const cplx> w1, std::span<const cplx> z1,
                 double selfCoef, double crossCoef, double sigmaGamma, double kappa, double h,
                 double dr, std::span<cplx> out) {
    const std::size_t n = w0.size();
    compute_potential(backend, w0, z0, selfCoef, crossCoef, dr, ws.potOld);
    compute_potential(backend, w1, z1, selfCoef, crossCoef, dr, ws.potNew);
    for (std::size_t i = 0; i < n; ++i) ws.potNew[i] = 0.5 * (ws.potOld[i] + ws.potNew[i]);

    const kernels::HalfStepCoeffs c{h, dr, sigmaGamma, kappa};
    compute_explicit(backend, w0, z0, ws.potNew, c, ws.explicitPart);

    const cplx I(0.0, 1.0);
    const double lap = h / (dr * dr);
    for (std::size_t i = 0; i < n; ++i) {
        ws.diag[i] = 1.0 + 2.0 * I * lap - h * sigmaGamma - I * h * ws.potNew[i];
        ws.rhs[i] = ws.explicitPart[i] - I * h * kappa * z1[i];
    }
    return ws.solver.solve(-I * lap, ws.diag, ws.rhs, out);
}

double max_update(std::span<const cplx> a, std::span<const cplx> b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(a[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

StepResult step_impl(Workspace& ws, const RadialState& state, const SystemParams& params,
                     double dt, const RunConfig& cfg) {
    if (!(dt > 0.0)) throw Error(ErrorKind::ConfigInvalid, "time step must be > 0");
    const std::size_t n = state.grid.n;
    const double dr = state.grid.dr;
    const double h = 0.5 * dt;

    StepResult res;
    res.state = state;
    std::vector<cplx> pNext(n), qNext(n);
    for (int k = 1; k <= cfg.cnMaxIterations; ++k) {
        const bool okP = solve_field(ws, cfg.backend, state.p, state.q, res.state.p, res.state.q,
                                     params.g1, params.g, +params.gamma, params.kappa, h, dr, pNext);
        const bool okQ = solve_field(ws, cfg.backend, state.q, state.p, res.state.q, res.state.p,
                                     params.g2, params.g, -params.gamma, params.kappa, h, dr, qNext);
        if (!okP || !okQ) throw Error(ErrorKind::SolverDiverged, "tridiagonal solve degenerated");
        const double change = std::max(max_update(pNext, res.state.p), max_update(qNext, res.state.q));
        res.state.p.swap(pNext);
        res.state.q.swap(qNext);
        res.iterations = k;
        if (!std::isfinite(change)) break;
        if (k >= cfg.cnIterations && change <= cfg.cnTolerance) {
            res.converged = true;
            break;
        }
    }
    res.state.t = state.t + dt;
    if (!res.state.all_finite())
        throw Error(ErrorKind::SolverDiverged, "non-finite field values");
    return res;
}

double peak_amplitude(Backend backend, std::span<const cplx> w, double dr) {
    return backend == Backend::Serial ? kernels::serial::max_abs_over_r(w, dr)
                                      : kernels::omp::max_abs_over_r(w, dr);
}

double relative_change(double before, double after) {
    return before > 0.0 ? std::abs(after - before) / before : 0.0;
}

/// Dispersed: combined peak amplitude stays below twice its initial value and
/// the mean squared width grows monotonically over the last quarter of the run.
bool looks_dispersed(const std::vector<DiagnosticsSample>& trace) {
    if (trace.size() < 2) return false;
    const DiagnosticsSample& first = trace.front();
    const double peak0 = std::sqrt(std::max(first.peakU2, first.peakV2));
    const double tEnd = trace.back().t;
    const double tQuarter = 0.75 * tEnd;
    double prevMsw = -1.0;
    std::size_t inWindow = 0;
    for (const DiagnosticsSample& s : trace) {
        if (s.t < tQuarter) continue;
        if (std::sqrt(std::max(s.peakU2, s.peakV2)) >= 2.0 * peak0) return false;
        if (prevMsw >= 0.0 && !(s.msw > prevMsw)) return false;
        prevMsw = s.msw;
        ++inWindow;
    }
    return inWindow >= 2;
}

} // namespace

StepResult step(const RadialState& state, const SystemParams& params, double dt,
                const RunConfig& cfg) {
    Workspace ws(state.grid.n);
    return step_impl(ws, state, params, dt, cfg);
}

RunOutcome run(const GaussianIC& ic, const SystemParams& params, const RadialGrid& grid,
               const RunConfig& cfg) {
    cfg.validate();
    ic.validate();
    // gamma = 0 and kappa = 0 are legitimate here (conservative and uncoupled runs).
    if (!(params.gamma >= 0.0) || !(params.kappa >= 0.0))
        throw Error(ErrorKind::ConfigInvalid, "simulation needs gamma >= 0 and kappa >= 0");
    if (params.dim != 3) throw Error(ErrorKind::ConfigInvalid, "radial simulation requires dim = 3");

    RunOutcome out;
    RadialState state = load_initial(ic, grid);
    Workspace ws(grid.n);
    const double dr = grid.dr;

    out.trace.push_back(grid_functionals(state, params, cfg.backend));
    const double origin0U = out.trace.front().originU;
    const double origin0V = out.trace.front().originV;
    double peakU = peak_amplitude(cfg.backend, state.p, dr);
    double peakV = peak_amplitude(cfg.backend, state.q, dr);

    double dt = cfg.dt0;
    std::size_t sinceSample = 0;
    const double tEps = 1e-12 * cfg.tMax;
    out.verdict = Verdict::MaxTimeReached;

    while (state.t < cfg.tMax - tEps) {
        const double dtTry = std::min(dt, cfg.tMax - state.t);
        StepResult res;
        const bool following = out.verdict == Verdict::BlowupLike;
        try {
            res = step_impl(ws, state, params, dtTry, cfg);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SolverDiverged) throw;
            if (dt > cfg.dtMin) {
                dt = std::max(0.5 * dt, cfg.dtMin);
                ++out.rejectedSteps;
                continue;
            }
            if (!following) out.verdict = Verdict::SolverDiverged;
            break;
        }
        const double newPeakU = peak_amplitude(cfg.backend, res.state.p, dr);
        const double newPeakV = peak_amplitude(cfg.backend, res.state.q, dr);
        const double change =
            std::max(relative_change(peakU, newPeakU), relative_change(peakV, newPeakV));
        if ((change > cfg.peakChangeLimit || !res.converged) && dt > cfg.dtMin) {
            dt = std::max(0.5 * dt, cfg.dtMin);
            ++out.rejectedSteps;
            continue;
        }

        state = std::move(res.state);
        peakU = newPeakU;
        peakV = newPeakV;
        ++out.steps;
        ++sinceSample;

        out.ratioU = std::abs(state.p.front()) / dr / origin0U;
        out.ratioV = std::abs(state.q.front()) / dr / origin0V;
        const bool hitU = out.ratioU >= cfg.blowupRatio;
        const bool hitV = out.ratioV >= cfg.blowupRatio;
        if (hitU && hitV) {
            if (out.verdict != Verdict::BlowupLike) out.tCross = state.t;
            out.verdict = Verdict::BlowupLike;
            out.component = Component::Both;
            break;
        }
        if (hitU || hitV) {
            // Keep going a little to see whether the other component follows.
            if (out.verdict != Verdict::BlowupLike) out.tCross = state.t;
            out.verdict = Verdict::BlowupLike;
            out.component = hitU ? Component::U : Component::V;
            if (std::max(out.ratioU, out.ratioV) >= cfg.followRatio * cfg.blowupRatio) break;
        }
        if (sinceSample >= cfg.sampleEvery) {
            out.trace.push_back(grid_functionals(state, params, cfg.backend));
            sinceSample = 0;
        }
    }

    if (out.trace.back().t != state.t && out.verdict != Verdict::SolverDiverged)
        out.trace.push_back(grid_functionals(state, params, cfg.backend));
    out.tStop = state.t;
    out.dtFinal = dt;
    if (out.verdict == Verdict::MaxTimeReached && looks_dispersed(out.trace))
        out.verdict = Verdict::Dispersed;
    return out;
}

double interpolate_trace(const std::vector<DiagnosticsSample>& trace, double t,
                         const std::function<double(const DiagnosticsSample&)>& field) {
    if (trace.empty()) return 0.0;
    if (t <= trace.front().t) return field(trace.front());
    if (t >= trace.back().t) return field(trace.back());
    auto it = std::lower_bound(trace.begin(), trace.end(), t,
                               [](const DiagnosticsSample& s, double x) { return s.t < x; });
    const DiagnosticsSample& hi = *it;
    const DiagnosticsSample& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return (1.0 - w) * field(lo) + w * field(hi);
}

ConvergenceReport convergence_check(const GaussianIC& ic, const SystemParams& params,
                                    const RadialGrid& grid, const RunConfig& cfg,
                                    int refinements) {
    ConvergenceReport rep;
    if (refinements < 1 || !(cfg.dt0 / 2.0 > cfg.dtMin)) {
        rep.noAdaptivityHeadroom = !(cfg.dt0 / 2.0 > cfg.dtMin);
        rep.converging = false;
        return rep;
    }

    const std::function<double(const DiagnosticsSample&)> fields[] = {
        [](const DiagnosticsSample& s) { return s.stokes.s0; },
        [](const DiagnosticsSample& s) { return s.energy; },
        [](const DiagnosticsSample& s) { return s.msw; },
    };

    RunConfig levelCfg = cfg;
    RadialGrid levelGrid = grid;
    for (int level = 0; level <= refinements; ++level) {
        if (level > 0) {
            levelGrid = RadialGrid::with_nodes(grid.L, 2 * levelGrid.n + 1);
            levelCfg.dt0 *= 0.5;
            levelCfg.sampleEvery *= 2;
            if (!(levelCfg.dt0 > levelCfg.dtMin)) {
                rep.noAdaptivityHeadroom = true;
                break;
            }
        }
        ConvergenceLevel lv;
        lv.dr = levelGrid.dr;
        lv.dt0 = levelCfg.dt0;
        lv.outcome = run(ic, params, levelGrid, levelCfg);
        if (!rep.levels.empty()) {
            const RunOutcome& prev = rep.levels.back().outcome;
            lv.tStopChange = std::abs(lv.outcome.tStop - prev.tStop) / prev.tStop;
            const double tCommon = std::min(lv.outcome.tStop, prev.tStop);
            double gap = 0.0;
            for (const DiagnosticsSample& s : prev.trace) {
                if (s.t > tCommon) break;
                for (const auto& f : fields) {
                    const double a = f(s);
                    const double b = interpolate_trace(lv.outcome.trace, s.t, f);
                    gap = std::max(gap, std::abs(a - b) / std::max(1.0, std::abs(a)));
                }
            }
            lv.traceDifference = gap;
            if (lv.outcome.verdict != prev.verdict) rep.verdictStable = false;
        }
        rep.levels.push_back(std::move(lv));
    }
    for (std::size_t i = 2; i < rep.levels.size(); ++i)
        if (*rep.levels[i].traceDifference >= *rep.levels[i - 1].traceDifference)
            rep.converging = false;
    return rep;
}

} // namespace ptnls
