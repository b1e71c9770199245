#pragma once

#include "ptnls/config.hpp"
#include "ptnls/criteria.hpp"
#include "ptnls/error.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ptnls {

/// 0 ok, 2 parse, 3 validation, 4 solver divergence, 5 I/O.
int exit_code(ErrorKind kind);

enum class FigureKind { FGCurves, ZCurves, Dynamics };

struct Scenario {
    std::string label;
    SystemParams params;
    GaussianIC ic;
    std::optional<double> tMax; // overrides run.tMax for dynamics figures
};

struct FigureDefinition {
    std::string id;
    FigureKind kind = FigureKind::Dynamics;
    double horizon = 0; // criteria figures: common time axis
    std::vector<Scenario> scenarios;
};

/// The captioned parameter sets behind each figure id. Throws ValidationError
/// for unknown ids.
FigureDefinition figure_definition(const std::string& id);

/// Criterion the `auto` choice resolves to for these params.
CriterionChoice resolve_criterion(CriterionChoice choice, const SystemParams& params);

/// Evaluates the selected criterion; the report carries its trace.
CriterionReport evaluate_criterion(CriterionChoice choice, const SystemParams& params,
                                   const GaussianIC& ic, double horizon, std::size_t samples);

/// Executes a job, writing artifacts under spec.outputDir. Errors from inner
/// modules are reported on `log` and mapped to exit codes.
int run_job(const JobSpec& spec, std::ostream& log);

} // namespace ptnls
