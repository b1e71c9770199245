#pragma once

#include "ptnls/model.hpp"
#include "ptnls/simulator.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ptnls {

enum class Mode { Criteria, Simulate, Sweep, Figure, Convergence };
enum class CriterionChoice { Auto, Theorem1, Theorem2, Manakov };
enum class SweepTask { Criteria, Simulate };

const char* to_string(Mode m);
const char* to_string(CriterionChoice c);
const char* to_string(SweepTask t);
std::optional<Mode> parse_mode(std::string_view text);

inline constexpr const char* kFigureIds[] = {"fig1a", "fig1b", "fig1c", "fig2", "fig3a",
                                              "fig3b", "fig3c", "fig4a", "fig4b"};

struct SweepAxis {
    std::string name; // any numeric params.* or ic.* key
    std::vector<double> values;
};

struct JobSpec {
    Mode mode = Mode::Criteria;
    SystemParams params;
    GaussianIC ic;
    RunConfig run;
    double gridL = 16.0;
    double gridDr = 2e-3;
    CriterionChoice criterion = CriterionChoice::Auto;
    std::optional<double> horizon; // default 4 / gamma
    std::size_t samples = 4096;
    std::optional<SweepAxis> sweepAxis;
    SweepTask sweepTask = SweepTask::Criteria;
    std::string figureId;
    int refinements = 1;
    std::string outputDir = "out";
    int workers = 1;

    bool operator==(const JobSpec&) const;
    RadialGrid grid() const;
    double effective_horizon() const;
};

/// Parses `key = value` lines (dotted keys, `#` comments). Throws ParseError
/// for malformed lines, duplicate or unknown keys, ValidationError for
/// out-of-range values.
JobSpec parse_config(std::string_view text);

void validate(const JobSpec& spec);

/// Emits every key so that parse_config(serialize_config(s)) == s.
std::string serialize_config(const JobSpec& spec);

/// Sets one numeric key (params.* / ic.* / run.* / grid.*) on a spec.
/// Returns false for keys that are not numeric scalars.
bool set_numeric(JobSpec& spec, std::string_view key, double value);

} // namespace ptnls
