#include "ptnls/jobs.hpp"

#include "ptnls/csv.hpp"
#include "ptnls/functionals.hpp"
#include "ptnls/simulator.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace ptnls {

namespace fs = std::filesystem;

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ParseError: return 2;
    case ErrorKind::SolverDiverged: return 4;
    case ErrorKind::IoError: return 5;
    default: return 3;
    }
}

namespace {

std::string label_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

SystemParams make_params(double gamma, double kappa, double g1, double g2, double g) {
    return SystemParams{gamma, kappa, g1, g2, g, 3};
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_text(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out.precision(15);
    return out;
}

void write_functionals(std::ostream& out, const InitialFunctionals& f) {
    out << "S0(0) = " << f.stokes.s0 << '\n'
        << "S1(0) = " << f.stokes.s1 << '\n'
        << "S2(0) = " << f.stokes.s2 << '\n'
        << "S3(0) = " << f.stokes.s3 << '\n'
        << "E(0) = " << f.energy << '\n'
        << "X(0) = " << f.msw << '\n'
        << "Y(0) = " << f.mswRate << '\n';
}

void write_params(std::ostream& out, const SystemParams& p, const GaussianIC& ic) {
    out << "gamma = " << p.gamma << "\nkappa = " << p.kappa << "\ng1 = " << p.g1
        << "\ng2 = " << p.g2 << "\ng = " << p.g << "\ndim = " << p.dim << "\nA = " << ic.ampU
        << "\nB = " << ic.ampV << "\na = " << ic.widthU << "\nb = " << ic.widthV << '\n'
        << "phase = " << to_string(classify_phase(p)) << '\n';
}

struct Summary {
    std::string verdict;
    std::optional<double> time;
    std::string component;
};

Summary criteria_job(const JobSpec& spec, const fs::path& dir) {
    ensure_dir(dir);
    const InitialFunctionals initial = gaussian_moments(spec.ic, spec.params);
    const double horizon = spec.effective_horizon();
    const CriterionChoice choice = resolve_criterion(spec.criterion, spec.params);
    const CriterionReport rep =
        evaluate_criterion(choice, spec.params, spec.ic, horizon, spec.samples);
    write_csv(dir / "criteria.csv", numeric_table(rep.columns, rep.trace));

    std::ofstream out = open_text(dir / "report.txt");
    out << "# criteria.csv columns: ";
    for (std::size_t i = 0; i < rep.columns.size(); ++i) out << (i ? "," : "") << rep.columns[i];
    out << "\ncriterion = " << to_string(rep.kind) << '\n';
    write_params(out, spec.params, spec.ic);
    if (spec.params.kappa > spec.params.gamma) {
        const RotationCoefficients rc = rotation_coefficients(spec.params);
        out << "alpha = " << rc.alpha << "\nalpha_arcsin = " << rc.alphaAlt
            << "\nomega = " << rc.omega << '\n';
    }
    write_functionals(out, initial);
    const CriterionConstants& c = rep.constants;
    out << "c1 = " << c.c1 << '\n';
    if (c.c2) out << "c2 = " << *c.c2 << '\n';
    out << "c3 = " << c.c3 << "\nc4 = " << c.c4 << '\n';
    if (c.beta) out << "beta = " << *c.beta << '\n';
    out << "horizon = " << horizon << "\nsatisfied = " << (rep.satisfied ? "true" : "false")
        << '\n';
    const char* timeName = rep.kind == CriterionKind::Theorem2 ? "T*" : "T0";
    if (rep.certifiedTime) out << timeName << " = " << *rep.certifiedTime << '\n';
    if (focusing_regime(spec.params)) {
        const LemmaThreshold l1 = lemma1_threshold(initial, spec.params);
        const LemmaThreshold l2 = lemma2_threshold(initial, spec.params);
        out << "lemma1.T0max = " << l1.T0max << "\nlemma1.T0min = " << l1.T0min
            << "\nlemma1.E0_bound = " << l1.bound
            << "\nlemma1.satisfied = " << (l1.satisfied ? "true" : "false")
            << "\nlemma2.Y0_bound = " << l2.bound
            << "\nlemma2.satisfied = " << (l2.satisfied ? "true" : "false") << '\n';
    }
    if (is_manakov(spec.params)) {
        const ManakovInvariants inv = manakov_invariants(initial, spec.params);
        out << "manakov.S1 = " << inv.S1const << "\nmanakov.S = " << inv.Sconst << '\n';
        if (inv.oscillation)
            out << "manakov.mean = " << inv.oscillation->mean
                << "\nmanakov.S01 = " << inv.oscillation->S01
                << "\nmanakov.S01_printed = " << inv.oscillation->S01printed
                << "\nmanakov.S02 = " << inv.oscillation->S02 << '\n';
    }
    return {rep.satisfied ? "satisfied" : "not_satisfied", rep.certifiedTime, ""};
}

void write_outcome(const fs::path& path, const RunOutcome& o, const SystemParams& p,
                   const GaussianIC& ic, const RadialGrid& grid) {
    std::ofstream out = open_text(path);
    out << "# trace.csv columns: ";
    for (std::size_t i = 0; i < trace_columns().size(); ++i)
        out << (i ? "," : "") << trace_columns()[i];
    out << '\n';
    write_params(out, p, ic);
    out << "L = " << grid.L << "\ndr = " << grid.dr << "\nnodes = " << grid.n << '\n'
        << "verdict = " << to_string(o.verdict) << "\ncomponent = " << to_string(o.component)
        << "\ntStop = " << o.tStop << "\ntCross = " << o.tCross << "\nratioU = " << o.ratioU
        << "\nratioV = " << o.ratioV << "\nsteps = " << o.steps
        << "\nrejectedSteps = " << o.rejectedSteps << "\ndtFinal = " << o.dtFinal << '\n';
}

Summary simulate_job(const JobSpec& spec, const fs::path& dir) {
    ensure_dir(dir);
    const RadialGrid grid = spec.grid();
    const RunOutcome o = run(spec.ic, spec.params, grid, spec.run);
    write_trace(dir / "trace.csv", o.trace);
    write_outcome(dir / "outcome.txt", o, spec.params, spec.ic, grid);
    if (o.verdict == Verdict::SolverDiverged)
        throw Error(ErrorKind::SolverDiverged, "run diverged at t = " + label_number(o.tStop));
    return {to_string(o.verdict), o.tStop, to_string(o.component)};
}

void sweep_job(const JobSpec& spec, const fs::path& dir, std::ostream& log) {
    ensure_dir(dir);
    const SweepAxis& axis = *spec.sweepAxis;
    const std::size_t count = axis.values.size();
    std::vector<Summary> results(count);
    std::vector<std::optional<Error>> errors(count);
    std::atomic<std::size_t> next{0};
    std::mutex logMutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            JobSpec sub = spec;
            set_numeric(sub, axis.name, axis.values[i]);
            const fs::path subdir = dir / (axis.name + "=" + label_number(axis.values[i]));
            try {
                validate(sub);
                results[i] = spec.sweepTask == SweepTask::Criteria ? criteria_job(sub, subdir)
                                                                   : simulate_job(sub, subdir);
            } catch (const Error& e) {
                errors[i] = e;
                results[i] = {"error", std::nullopt, ""};
                std::lock_guard lock(logMutex);
                log << "sweep " << axis.name << "=" << axis.values[i] << ": " << e.what() << '\n';
            }
        }
    };
    const int nThreads = std::max(1, std::min<int>(spec.workers, static_cast<int>(count)));
    std::vector<std::thread> pool;
    for (int k = 1; k < nThreads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    CsvTable summary;
    summary.header = {axis.name, "verdict", spec.sweepTask == SweepTask::Criteria ? "time" : "tStop",
                      "component"};
    for (std::size_t i = 0; i < count; ++i)
        summary.rows.push_back({format_number(axis.values[i]), results[i].verdict,
                                results[i].time ? format_number(*results[i].time) : "none",
                                results[i].component.empty() ? "none" : results[i].component});
    write_csv(dir / "summary.csv", summary);

    for (const auto& e : errors)
        if (e) throw *e;
}

void figure_job(const JobSpec& spec, const fs::path& dir) {
    ensure_dir(dir);
    const FigureDefinition fig = figure_definition(spec.figureId);
    CsvTable summary;

    if (fig.kind == FigureKind::Dynamics) {
        summary.header = {"scenario", "verdict", "component", "tStop", "tCross"};
        for (const Scenario& sc : fig.scenarios) {
            RunConfig cfg = spec.run;
            if (sc.tMax) cfg.tMax = *sc.tMax;
            const RadialGrid grid = spec.grid();
            const RunOutcome o = run(sc.ic, sc.params, grid, cfg);
            write_trace(dir / (fig.id + "_" + sc.label + ".csv"), o.trace);
            write_outcome(dir / (fig.id + "_" + sc.label + ".txt"), o, sc.params, sc.ic, grid);
            summary.rows.push_back({sc.label, to_string(o.verdict), to_string(o.component),
                                    format_number(o.tStop), format_number(o.tCross)});
        }
        write_csv(dir / "summary.csv", summary);
        return;
    }

    // Criteria figures: one column per scenario on a common time axis.
    const CriterionChoice choice =
        fig.kind == FigureKind::ZCurves ? CriterionChoice::Theorem2 : CriterionChoice::Theorem1;
    std::vector<CriterionReport> reports;
    for (const Scenario& sc : fig.scenarios)
        reports.push_back(evaluate_criterion(choice, sc.params, sc.ic, fig.horizon, spec.samples));

    std::vector<std::string> header = {"t"};
    for (std::size_t k = 0; k < reports.size(); ++k)
        for (std::size_t c = 1; c < reports[k].columns.size(); ++c)
            header.push_back(reports[k].columns[c] + "_" + fig.scenarios[k].label);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < reports.front().trace.size(); ++i) {
        std::vector<double> row = {reports.front().trace[i][0]};
        for (const auto& rep : reports)
            row.insert(row.end(), rep.trace[i].begin() + 1, rep.trace[i].end());
        rows.push_back(std::move(row));
    }
    write_csv(dir / (fig.id + ".csv"), numeric_table(header, rows));

    if (fig.kind == FigureKind::FGCurves) {
        // Initial profiles for the left-hand panels.
        std::vector<std::string> ph = {"r"};
        for (const Scenario& sc : fig.scenarios) {
            ph.push_back("u0_" + sc.label);
            ph.push_back("v0_" + sc.label);
        }
        std::vector<std::vector<double>> prow;
        for (int i = 0; i <= 400; ++i) {
            const double r = 1.0 * i / 400.0;
            std::vector<double> row = {r};
            for (const Scenario& sc : fig.scenarios) {
                const auto [u0, v0] = evaluate_ic(sc.ic, sc.params, r);
                row.push_back(u0.real());
                row.push_back(v0.real());
            }
            prow.push_back(std::move(row));
        }
        write_csv(dir / (fig.id + "_profiles.csv"), numeric_table(ph, prow));
    }

    summary.header = {"scenario", "verdict", "time"};
    for (std::size_t k = 0; k < reports.size(); ++k)
        summary.rows.push_back({fig.scenarios[k].label,
                                reports[k].satisfied ? "satisfied" : "not_satisfied",
                                reports[k].certifiedTime ? format_number(*reports[k].certifiedTime)
                                                         : "none"});
    write_csv(dir / "summary.csv", summary);
}

void convergence_job(const JobSpec& spec, const fs::path& dir) {
    ensure_dir(dir);
    const ConvergenceReport rep =
        convergence_check(spec.ic, spec.params, spec.grid(), spec.run, spec.refinements);
    CsvTable table;
    table.header = {"level", "dr", "dt0", "verdict", "component", "tStop", "tStopChange",
                    "traceDifference"};
    for (std::size_t i = 0; i < rep.levels.size(); ++i) {
        const ConvergenceLevel& lv = rep.levels[i];
        table.rows.push_back({std::to_string(i), format_number(lv.dr), format_number(lv.dt0),
                              to_string(lv.outcome.verdict), to_string(lv.outcome.component),
                              format_number(lv.outcome.tStop),
                              lv.tStopChange ? format_number(*lv.tStopChange) : "none",
                              lv.traceDifference ? format_number(*lv.traceDifference) : "none"});
        write_trace(dir / ("trace_level" + std::to_string(i) + ".csv"), lv.outcome.trace);
    }
    write_csv(dir / "convergence.csv", table);
    std::ofstream out = open_text(dir / "report.txt");
    out << "# convergence.csv columns: level,dr,dt0,verdict,component,tStop,tStopChange,"
           "traceDifference\n"
        << "levels = " << rep.levels.size()
        << "\nnoAdaptivityHeadroom = " << (rep.noAdaptivityHeadroom ? "true" : "false")
        << "\nverdictStable = " << (rep.verdictStable ? "true" : "false")
        << "\nconverging = " << (rep.converging ? "true" : "false") << '\n';
}

} // namespace

FigureDefinition figure_definition(const std::string& id) {
    FigureDefinition fig;
    fig.id = id;
    if (id == "fig1a" || id == "fig1b" || id == "fig1c") {
        fig.kind = FigureKind::ZCurves;
        fig.horizon = 8.0;
        if (id == "fig1a") {
            for (double B : {1.3, 2.6, 3.9})
                fig.scenarios.push_back({"B" + label_number(B), make_params(0.5, 1.0, 4.0, -1.0, -0.5),
                                         {5.8, B, 1.0, 1.0}, std::nullopt});
        } else if (id == "fig1b") {
            for (double gamma : {0.15, 0.3, 0.45})
                fig.scenarios.push_back({"gamma" + label_number(gamma),
                                         make_params(gamma, 1.0, 4.0, -1.0, -0.5),
                                         {5.8, 0.9, 1.0, 1.0}, std::nullopt});
        } else {
            for (double kappa : {0.4, 0.8, 1.2})
                fig.scenarios.push_back({"kappa" + label_number(kappa),
                                         make_params(0.5, kappa, 4.0, -1.0, -0.5),
                                         {5.8, 0.9, 1.0, 1.0}, std::nullopt});
        }
    } else if (id == "fig2") {
        fig.kind = FigureKind::FGCurves;
        fig.horizon = 5.0;
        const SystemParams p = make_params(0.5, 1.0, 1.0, 1.0, -0.5);
        fig.scenarios = {{"a", p, {4.0, 2.0, 0.3, 0.1}, std::nullopt},
                         {"c", p, {4.0, 3.0, 0.3, 0.1}, std::nullopt},
                         {"e", p, {4.0, 2.0, 0.3, 0.16}, std::nullopt}};
    } else if (id == "fig3a" || id == "fig3b") {
        fig.kind = FigureKind::Dynamics;
        const double gamma = id == "fig3a" ? 0.5 : 1.5;
        for (double g : {1.0, -1.0, -2.0})
            fig.scenarios.push_back({"g" + label_number(g), make_params(gamma, 1.0, 1.0, 1.0, g),
                                     {4.5, 4.0, 1.0, 0.5}, std::nullopt});
    } else if (id == "fig3c") {
        fig.kind = FigureKind::Dynamics;
        for (double gamma : {0.5, 1.5})
            fig.scenarios.push_back({"gamma" + label_number(gamma),
                                     make_params(gamma, 1.0, 1.0, 1.0, 1.0), {0.5, 2.7, 0.3, 0.3},
                                     1.0});
    } else if (id == "fig4a") {
        fig.kind = FigureKind::Dynamics;
        for (double A : {3.0, 6.0})
            fig.scenarios.push_back({"A" + label_number(A), make_params(0.5, 1.0, 1.0, 1.0, 1.0),
                                     {A, 1.0, 1.0, 0.5}, std::nullopt});
    } else if (id == "fig4b") {
        fig.kind = FigureKind::Dynamics;
        for (double gamma : {0.5, 0.9})
            fig.scenarios.push_back({"gamma" + label_number(gamma),
                                     make_params(gamma, 1.0, 1.0, 1.0, 1.0), {1.0, 1.0, 1.0, 0.5},
                                     std::nullopt});
    } else {
        throw Error(ErrorKind::ValidationError, "unknown figure id '" + id + "'");
    }
    return fig;
}

CriterionChoice resolve_criterion(CriterionChoice choice, const SystemParams& params) {
    if (choice != CriterionChoice::Auto) return choice;
    if (focusing_regime(params)) return CriterionChoice::Theorem1;
    if (early_collapse_regime(params)) return CriterionChoice::Theorem2;
    throw Error(ErrorKind::RegimeViolation,
                "nonlinear coefficients fit neither the focusing nor the early-collapse regime");
}

CriterionReport evaluate_criterion(CriterionChoice choice, const SystemParams& params,
                                   const GaussianIC& ic, double horizon, std::size_t samples) {
    const InitialFunctionals initial = gaussian_moments(ic, params);
    switch (resolve_criterion(choice, params)) {
    case CriterionChoice::Theorem2: return check_theorem2(initial, params, horizon, samples);
    case CriterionChoice::Manakov: return check_manakov_theorem(initial, params, horizon, samples);
    default: return check_theorem1(initial, params, horizon, samples);
    }
}

int run_job(const JobSpec& spec, std::ostream& log) {
    try {
        validate(spec);
        const fs::path dir = spec.outputDir;
        switch (spec.mode) {
        case Mode::Criteria: criteria_job(spec, dir); break;
        case Mode::Simulate: simulate_job(spec, dir); break;
        case Mode::Sweep: sweep_job(spec, dir, log); break;
        case Mode::Figure: figure_job(spec, dir); break;
        case Mode::Convergence: convergence_job(spec, dir); break;
        }
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return exit_code(ErrorKind::IoError);
    }
    return 0;
}

} // namespace ptnls
