// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "oracles.hpp"

#include "ptnls/criteria.hpp"
#include "ptnls/functionals.hpp"
#include "ptnls/jobs.hpp"
#include "ptnls/simulator.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace ptnls;

namespace {

struct Verdict1 {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budgetSeconds, const std::function<Verdict1()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict1 v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budgetSeconds > 0 && secs > budgetSeconds) {
        v.pass = false;
        v.detail += " [over runtime budget]";
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %2d %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", id, title, secs,
                v.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

const SystemParams kFig3a{0.5, 1.0, 1.0, 1.0, 1.0, 3};
const GaussianIC kFig3aIC{4.5, 4.0, 1.0, 0.5};
const RadialGrid& desk_grid() {
    static const RadialGrid g = RadialGrid::with_spacing(16.0, 2e-3);
    return g;
}

/// Fig. 3(a) g = 1 run shared by criteria 6, 7 and 8.
const RunOutcome& fig3a_g1() {
    static const RunOutcome o = run(kFig3aIC, kFig3a, desk_grid(), RunConfig{});
    return o;
}

double max_rel(const std::vector<DiagnosticsSample>& tr, double tEnd,
               const std::function<double(const DiagnosticsSample&)>& f) {
    const double ref = f(tr.front());
    double worst = 0.0;
    for (const auto& d : tr)
        if (d.t <= tEnd) worst = std::max(worst, std::abs(f(d) - ref) / std::max(1.0, std::abs(ref)));
    return worst;
}

} // namespace

int main() {
    criterion(1, "Gaussian moment oracle", 10.0, [] {
        std::mt19937 rng(20240501);
        std::uniform_real_distribution<double> amp(0.2, 6.0), width(0.1, 2.0);
        std::uniform_int_distribution<int> dims(3, 5);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double A = amp(rng), B = amp(rng), a = width(rng), b = width(rng);
            const SystemParams p{0.5, 1.0, 4.0, -1.0, -0.5, dims(rng)};
            const InitialFunctionals m = gaussian_moments({A, B, a, b}, p);
            const auto q = oracle::gaussian_quadrature(A, B, a, b, p.dim);
            for (double e : {oracle::rel(m.stokes.s0, q.normU + q.normV),
                             oracle::rel(m.stokes.s1, 2.0 * q.overlap),
                             oracle::rel(m.stokes.s3, q.normU - q.normV),
                             oracle::rel(m.msw, q.secondU + q.secondV),
                             oracle::rel(m.mswRate, 2.0 * p.gamma * (q.secondU - q.secondV)),
                             oracle::rel(m.energy, oracle::energy(q, p.kappa, p.g1, p.g2, p.g))})
                worst = std::max(worst, e);
            if (m.stokes.s2 != 0.0) worst = 1.0;
        }
        return Verdict1{worst < 1e-8, "max relative deviation " + fmt("%.2e", worst)};
    });

    criterion(2, "Criterion constants", 0.0, [] {
        const CriterionConstants c = constants({0.5, 1.0, 1.0, 1.0, 0.0, 3});
        const double eps = 4 * std::numeric_limits<double>::epsilon();
        auto exact = [&](double x, double ref) { return std::abs(x - ref) <= eps * std::abs(ref); };
        const bool consts = exact(c.c1, 23.0) && exact(*c.c2, 0.8) && exact(c.c3, 19.2) &&
                            exact(constants({0.5, 1.0, 1.0, 1.0, 1.0, 3}).c4, std::sqrt(7.0));
        const double ratio = c.c3 * 0.5 / *c.c2;
        const double manakov = 48.0 * 3 * 0.5 / 5.0;
        const bool identity = exact(ratio, manakov);
        std::string d = std::string("c1=23, c2=0.8, c3=19.2, c4=sqrt(7) ") +
                        (consts ? "exact" : "MISMATCH") + "; c3*gamma/c2 = " + fmt("%.12g", ratio) +
                        " vs 48*N*gamma/(N+2) = " + fmt("%.12g", manakov) +
                        (identity ? "" : " (identity does not hold for these constants)");
        return Verdict1{consts && identity, d};
    });

    criterion(3, "Theorem 1 on Fig. 2 parameter sets", 5.0, [] {
        const FigureDefinition fig = figure_definition("fig2");
        const bool expected[] = {false, true, true};
        bool ok = true;
        std::string d;
        for (std::size_t k = 0; k < fig.scenarios.size(); ++k) {
            const Scenario& sc = fig.scenarios[k];
            const InitialFunctionals f = gaussian_moments(sc.ic, sc.params);
            const auto rep = check_theorem1(f, sc.params, default_horizon(sc.params));
            ok = ok && rep.satisfied == expected[k];
            d += "(" + sc.label + ") E0=" + fmt("%.4g", f.energy) + " " +
                 (rep.satisfied ? "satisfied" : "not satisfied") + " [expected " +
                 (expected[k] ? "satisfied" : "not satisfied") + "]; ";
        }
        return Verdict1{ok, d};
    });

    criterion(4, "Theorem 2 orderings on Fig. 1 parameter sets", 10.0, [] {
        bool ok = true;
        std::string d;
        for (const char* id : {"fig1a", "fig1b", "fig1c"}) {
            const FigureDefinition fig = figure_definition(id);
            std::vector<std::optional<double>> roots;
            for (const Scenario& sc : fig.scenarios)
                roots.push_back(check_theorem2(gaussian_moments(sc.ic, sc.params), sc.params,
                                               fig.horizon)
                                    .certifiedTime);
            bool increasing = true;
            for (std::size_t k = 0; k < roots.size(); ++k) {
                if (!roots[k] || (k > 0 && roots[k - 1] && !(*roots[k] > *roots[k - 1])))
                    increasing = false;
            }
            ok = ok && increasing;
            d += std::string(id) + " T*=";
            for (std::size_t k = 0; k < roots.size(); ++k)
                d += (k ? "," : "") + (roots[k] ? fmt("%.4f", *roots[k]) : std::string("none"));
            d += increasing ? " ok; " : " not increasing; ";
        }
        return Verdict1{ok, d};
    });

    criterion(5, "Conservation at gamma = 0", 120.0, [] {
        RunConfig cfg;
        cfg.tMax = 1.0;
        const RunOutcome o = run(kFig3aIC, {0.0, 1.0, 1.0, 1.0, 1.0, 3}, desk_grid(), cfg);
        const auto& tr = o.trace;
        const double s0 = tr.front().stokes.s0, e0 = tr.front().energy;
        double ds = 0.0, de = 0.0;
        for (const auto& d : tr) {
            ds = std::max(ds, std::abs(d.stokes.s0 - s0) / s0);
            de = std::max(de, std::abs(d.energy - e0) / std::max(1.0, std::abs(e0)));
        }
        return Verdict1{ds < 1e-6 && de < 1e-6,
                        "S0 drift " + fmt("%.2e", ds) + ", E drift " + fmt("%.2e", de) + " up to t=" +
                            fmt("%.5f", o.tStop) + " (" + to_string(o.verdict) + ")"};
    });

    criterion(6, "Balance law and S0 bound", 0.0, [] {
        const RunOutcome& o = fig3a_g1();
        const auto& tr = o.trace;
        const InitialFunctionals f0 = to_initial(tr.front());
        // Pre-blowup window: up to 90% of the first ratio crossing.
        const double tEnd = 0.9 * o.tCross;
        double balance = 0.0;
        bool bound = true;
        for (std::size_t i = 1; i + 1 < tr.size() && tr[i + 1].t <= tEnd; ++i) {
            const double dS0 = (tr[i + 1].stokes.s0 - tr[i - 1].stokes.s0) / (tr[i + 1].t - tr[i - 1].t);
            balance = std::max(balance, std::abs(0.5 * dS0 - kFig3a.gamma * tr[i].stokes.s3) /
                                            tr[i].stokes.s0);
            bound = bound && tr[i].stokes.s0 <= s0_upper_bound(f0, kFig3a, tr[i].t) * (1.0 + 1e-6);
        }
        return Verdict1{balance < 1e-4 && bound,
                        "max |dS0/2dt - gamma S3| / S0 = " + fmt("%.2e", balance) +
                            (bound ? ", S0 bound holds" : ", S0 bound VIOLATED")};
    });

    criterion(7, "Manakov invariants and S0 oscillation", 0.0, [] {
        const RunOutcome& o = fig3a_g1();
        const auto& tr = o.trace;
        const double tEnd = o.tCross;
        const double k = kFig3a.kappa, g = kFig3a.gamma;
        const double dS1 = max_rel(tr, tEnd, [](const DiagnosticsSample& d) { return d.stokes.s1; });
        const double dS = max_rel(tr, tEnd, [&](const DiagnosticsSample& d) {
            return k * d.stokes.s0 - g * d.stokes.s2;
        });
        const ManakovOscillation osc = *manakov_invariants(to_initial(tr.front()), kFig3a).oscillation;
        double fit = 0.0;
        for (const auto& d : tr)
            if (d.t <= tEnd) fit = std::max(fit, std::abs(d.stokes.s0 - osc.s0_at(d.t)) / d.stokes.s0);
        return Verdict1{dS1 < 1e-5 && dS < 1e-5 && fit < 1e-3,
                        "S1 drift " + fmt("%.2e", dS1) + ", kS0-gS2 drift " + fmt("%.2e", dS) +
                            ", S0 fit deviation " + fmt("%.2e", fit) + " over t<=" + fmt("%.4f", tEnd)};
    });

    criterion(8, "Scenario verdicts (Fig. 3)", 600.0, [] {
        bool ok = true;
        std::string d;
        const RunOutcome& g1 = fig3a_g1();
        ok = ok && g1.verdict == Verdict::BlowupLike && g1.component == Component::Both;
        d += "3a g=1 " + std::string(to_string(g1.verdict)) + "/" + to_string(g1.component) + "; ";
        double tStop[2] = {0, 0};
        int idx = 0;
        for (double g : {-1.0, -2.0}) {
            const RunOutcome o = run(kFig3aIC, {0.5, 1.0, 1.0, 1.0, g, 3}, desk_grid(), RunConfig{});
            ok = ok && o.verdict == Verdict::BlowupLike && o.component == Component::V;
            tStop[idx++] = o.tStop;
            d += "3a g=" + fmt("%g", g) + " " + to_string(o.verdict) + "/" + to_string(o.component) +
                 " t=" + fmt("%.5f", o.tStop) + "; ";
        }
        ok = ok && tStop[1] < tStop[0];
        const FigureDefinition fig = figure_definition("fig3c");
        const Verdict expected[] = {Verdict::BlowupLike, Verdict::Dispersed};
        for (std::size_t k = 0; k < fig.scenarios.size(); ++k) {
            RunConfig cfg;
            cfg.tMax = *fig.scenarios[k].tMax;
            const RunOutcome o = run(fig.scenarios[k].ic, fig.scenarios[k].params, desk_grid(), cfg);
            ok = ok && o.verdict == expected[k];
            d += "3c " + fig.scenarios[k].label + " " + to_string(o.verdict) + "; ";
        }
        return Verdict1{ok, d};
    });

    criterion(9, "Lemma implications on random inputs", 0.0, [] {
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int checked = 0, violations = 0;
        for (int i = 0; i < 50; ++i) {
            const SystemParams p{0.1 + u(rng), 0.5 + 2 * u(rng), 0.2 + 2 * u(rng), 0.2 + 2 * u(rng),
                                 u(rng) - 0.2, 3 + static_cast<int>(3 * u(rng))};
            if (!focusing_regime(p)) continue;
            InitialFunctionals f;
            f.stokes.s0 = 0.01 + 3 * u(rng);
            f.msw = 0.01 + 3 * u(rng);
            const bool energyLed = i % 2 == 0;
            f.energy = energyLed ? -std::pow(10.0, 1 + 6 * u(rng)) : -20 * u(rng);
            f.mswRate = energyLed ? 6 * u(rng) - 3 : -std::pow(10.0, 1 + 6 * u(rng));
            const LemmaThreshold l1 = lemma1_threshold(f, p), l2 = lemma2_threshold(f, p);
            if (!l1.satisfied && !l2.satisfied) continue;
            ++checked;
            const auto rep = check_theorem1(f, p, 1.01 * std::max(l1.T0max, l2.T0max));
            if (!rep.satisfied) ++violations;
        }
        return Verdict1{violations == 0 && checked >= 10,
                        std::to_string(checked) + " of 50 inputs met a lemma, " +
                            std::to_string(violations) + " implication violations"};
    });

    criterion(10, "Convergence under one refinement", 0.0, [] {
        const ConvergenceReport rep = convergence_check(kFig3aIC, kFig3a, desk_grid(), RunConfig{}, 1);
        if (rep.levels.size() != 2) return Verdict1{false, "refinement did not run"};
        const double change = *rep.levels[1].tStopChange;
        return Verdict1{change < 0.05 && rep.verdictStable,
                        "tStop " + fmt("%.6f", rep.levels[0].outcome.tStop) + " -> " +
                            fmt("%.6f", rep.levels[1].outcome.tStop) + " (change " +
                            fmt("%.2e", change) + "), verdict " +
                            (rep.verdictStable ? "stable" : "changed")};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
