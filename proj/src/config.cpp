#include "ptnls/config.hpp"

#include "ptnls/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ptnls {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& reason) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + reason);
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    // strtod accepts "inf"/"nan", which no key here allows.
    std::string buf(s);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long long> to_integer(std::string_view s) {
    s = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using Setter = std::function<void(JobSpec&, std::string_view, std::size_t)>;

template <class F>
Setter number(F field) {
    return [field](JobSpec& s, std::string_view v, std::size_t line) {
        const auto d = to_double(v);
        if (!d) parse_error(line, "expected a number, got '" + std::string(v) + "'");
        field(s) = *d;
    };
}

template <class F>
Setter integer(F field) {
    return [field](JobSpec& s, std::string_view v, std::size_t line) {
        const auto d = to_integer(v);
        if (!d) parse_error(line, "expected an integer, got '" + std::string(v) + "'");
        field(s) = static_cast<std::remove_reference_t<decltype(field(s))>>(*d);
    };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"mode",
         [](JobSpec& s, std::string_view v, std::size_t line) {
             const auto m = parse_mode(v);
             if (!m) parse_error(line, "unknown mode '" + std::string(v) + "'");
             s.mode = *m;
         }},
        {"params.gamma", number([](JobSpec& s) -> double& { return s.params.gamma; })},
        {"params.kappa", number([](JobSpec& s) -> double& { return s.params.kappa; })},
        {"params.g1", number([](JobSpec& s) -> double& { return s.params.g1; })},
        {"params.g2", number([](JobSpec& s) -> double& { return s.params.g2; })},
        {"params.g", number([](JobSpec& s) -> double& { return s.params.g; })},
        {"params.dim", integer([](JobSpec& s) -> int& { return s.params.dim; })},
        {"ic.A", number([](JobSpec& s) -> double& { return s.ic.ampU; })},
        {"ic.B", number([](JobSpec& s) -> double& { return s.ic.ampV; })},
        {"ic.a", number([](JobSpec& s) -> double& { return s.ic.widthU; })},
        {"ic.b", number([](JobSpec& s) -> double& { return s.ic.widthV; })},
        {"grid.L", number([](JobSpec& s) -> double& { return s.gridL; })},
        {"grid.dr", number([](JobSpec& s) -> double& { return s.gridDr; })},
        {"run.dt0", number([](JobSpec& s) -> double& { return s.run.dt0; })},
        {"run.dtMin", number([](JobSpec& s) -> double& { return s.run.dtMin; })},
        {"run.blowupRatio", number([](JobSpec& s) -> double& { return s.run.blowupRatio; })},
        {"run.followRatio", number([](JobSpec& s) -> double& { return s.run.followRatio; })},
        {"run.tMax", number([](JobSpec& s) -> double& { return s.run.tMax; })},
        {"run.sampleEvery",
         integer([](JobSpec& s) -> std::size_t& { return s.run.sampleEvery; })},
        {"run.cnIterations", integer([](JobSpec& s) -> int& { return s.run.cnIterations; })},
        {"run.cnMaxIterations",
         integer([](JobSpec& s) -> int& { return s.run.cnMaxIterations; })},
        {"run.cnTolerance", number([](JobSpec& s) -> double& { return s.run.cnTolerance; })},
        {"run.peakChangeLimit",
         number([](JobSpec& s) -> double& { return s.run.peakChangeLimit; })},
        {"criteria.kind",
         [](JobSpec& s, std::string_view v, std::size_t line) {
             for (auto c : {CriterionChoice::Auto, CriterionChoice::Theorem1,
                            CriterionChoice::Theorem2, CriterionChoice::Manakov})
                 if (v == to_string(c)) {
                     s.criterion = c;
                     return;
                 }
             parse_error(line, "unknown criteria.kind '" + std::string(v) + "'");
         }},
        {"criteria.horizon",
         [](JobSpec& s, std::string_view v, std::size_t line) {
             const auto d = to_double(v);
             if (!d) parse_error(line, "expected a number");
             s.horizon = *d;
         }},
        {"criteria.samples", integer([](JobSpec& s) -> std::size_t& { return s.samples; })},
        {"sweep.axis",
         [](JobSpec& s, std::string_view v, std::size_t) {
             if (!s.sweepAxis) s.sweepAxis.emplace();
             s.sweepAxis->name = std::string(v);
         }},
        {"sweep.values",
         [](JobSpec& s, std::string_view v, std::size_t line) {
             if (!s.sweepAxis) s.sweepAxis.emplace();
             s.sweepAxis->values.clear();
             std::size_t pos = 0;
             while (pos <= v.size()) {
                 const auto comma = v.find(',', pos);
                 const auto item = v.substr(pos, comma == std::string_view::npos ? v.npos
                                                                                  : comma - pos);
                 const auto d = to_double(item);
                 if (!d) parse_error(line, "bad sweep value '" + std::string(trim(item)) + "'");
                 s.sweepAxis->values.push_back(*d);
                 if (comma == std::string_view::npos) break;
                 pos = comma + 1;
             }
         }},
        {"sweep.task",
         [](JobSpec& s, std::string_view v, std::size_t line) {
             if (v == "criteria")
                 s.sweepTask = SweepTask::Criteria;
             else if (v == "simulate")
                 s.sweepTask = SweepTask::Simulate;
             else
                 parse_error(line, "sweep.task must be criteria or simulate");
         }},
        {"figure.id", [](JobSpec& s, std::string_view v, std::size_t) { s.figureId = v; }},
        {"convergence.refinements", integer([](JobSpec& s) -> int& { return s.refinements; })},
        {"output.dir", [](JobSpec& s, std::string_view v, std::size_t) { s.outputDir = v; }},
        {"workers", integer([](JobSpec& s) -> int& { return s.workers; })},
    };
    return table;
}

bool is_sweepable(std::string_view key) {
    return key.starts_with("params.") || key.starts_with("ic.");
}

} // namespace

const char* to_string(Mode m) {
    switch (m) {
    case Mode::Criteria: return "criteria";
    case Mode::Simulate: return "simulate";
    case Mode::Sweep: return "sweep";
    case Mode::Figure: return "figure";
    case Mode::Convergence: return "convergence";
    }
    return "unknown";
}

const char* to_string(CriterionChoice c) {
    switch (c) {
    case CriterionChoice::Auto: return "auto";
    case CriterionChoice::Theorem1: return "theorem1";
    case CriterionChoice::Theorem2: return "theorem2";
    case CriterionChoice::Manakov: return "manakov";
    }
    return "unknown";
}

const char* to_string(SweepTask t) {
    return t == SweepTask::Criteria ? "criteria" : "simulate";
}

std::optional<Mode> parse_mode(std::string_view text) {
    for (auto m : {Mode::Criteria, Mode::Simulate, Mode::Sweep, Mode::Figure, Mode::Convergence})
        if (text == to_string(m)) return m;
    return std::nullopt;
}

bool JobSpec::operator==(const JobSpec& o) const {
    auto same_params = [](const SystemParams& a, const SystemParams& b) {
        return a.gamma == b.gamma && a.kappa == b.kappa && a.g1 == b.g1 && a.g2 == b.g2 &&
               a.g == b.g && a.dim == b.dim;
    };
    auto same_ic = [](const GaussianIC& a, const GaussianIC& b) {
        return a.ampU == b.ampU && a.ampV == b.ampV && a.widthU == b.widthU &&
               a.widthV == b.widthV;
    };
    auto same_run = [](const RunConfig& a, const RunConfig& b) {
        return a.dt0 == b.dt0 && a.dtMin == b.dtMin && a.blowupRatio == b.blowupRatio &&
               a.followRatio == b.followRatio && a.tMax == b.tMax &&
               a.sampleEvery == b.sampleEvery && a.cnIterations == b.cnIterations &&
               a.cnTolerance == b.cnTolerance && a.cnMaxIterations == b.cnMaxIterations &&
               a.peakChangeLimit == b.peakChangeLimit;
    };
    auto same_axis = [](const std::optional<SweepAxis>& a, const std::optional<SweepAxis>& b) {
        if (a.has_value() != b.has_value()) return false;
        return !a || (a->name == b->name && a->values == b->values);
    };
    return mode == o.mode && same_params(params, o.params) && same_ic(ic, o.ic) &&
           same_run(run, o.run) && gridL == o.gridL && gridDr == o.gridDr &&
           criterion == o.criterion && horizon == o.horizon && samples == o.samples &&
           same_axis(sweepAxis, o.sweepAxis) && sweepTask == o.sweepTask &&
           figureId == o.figureId && refinements == o.refinements &&
           outputDir == o.outputDir && workers == o.workers;
}

RadialGrid JobSpec::grid() const { return RadialGrid::with_spacing(gridL, gridDr); }

double JobSpec::effective_horizon() const {
    return horizon ? *horizon : 4.0 / params.gamma;
}

JobSpec parse_config(std::string_view text) {
    JobSpec spec;
    std::set<std::string, std::less<>> seen;
    std::size_t lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineNo;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parse_error(lineNo, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) parse_error(lineNo, "missing key");
        if (value.empty()) parse_error(lineNo, "missing value for '" + std::string(key) + "'");

        const auto it = setters().find(key);
        if (it == setters().end()) parse_error(lineNo, "unknown key '" + std::string(key) + "'");
        if (!seen.emplace(key).second)
            parse_error(lineNo, "duplicate key '" + std::string(key) + "'");
        it->second(spec, value, lineNo);
    }
    validate(spec);
    return spec;
}

void validate(const JobSpec& spec) {
    spec.params.validate();
    spec.ic.validate();
    try {
        spec.run.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, e.what());
    }
    if (!(spec.gridL > 0.0) || !(spec.gridDr > 0.0) || spec.gridDr >= spec.gridL)
        throw Error(ErrorKind::ValidationError, "need 0 < grid.dr < grid.L");
    if (spec.horizon && !(*spec.horizon > 0.0))
        throw Error(ErrorKind::ValidationError, "criteria.horizon must be > 0");
    if (spec.samples < 2) throw Error(ErrorKind::ValidationError, "criteria.samples must be >= 2");
    if (spec.refinements < 1)
        throw Error(ErrorKind::ValidationError, "convergence.refinements must be >= 1");
    if (spec.workers < 1) throw Error(ErrorKind::ValidationError, "workers must be >= 1");
    if (spec.mode == Mode::Figure &&
        std::none_of(std::begin(kFigureIds), std::end(kFigureIds),
                     [&](const char* id) { return spec.figureId == id; }))
        throw Error(ErrorKind::ValidationError,
                    "figure mode needs figure.id in {fig1a, fig1b, fig1c, fig2, fig3a, fig3b, "
                    "fig3c, fig4a, fig4b}");
    if (spec.mode == Mode::Sweep) {
        if (!spec.sweepAxis || spec.sweepAxis->values.empty())
            throw Error(ErrorKind::ValidationError, "sweep mode needs sweep.axis and sweep.values");
        JobSpec probe = spec;
        if (!is_sweepable(spec.sweepAxis->name) ||
            !set_numeric(probe, spec.sweepAxis->name, spec.sweepAxis->values.front()))
            throw Error(ErrorKind::ValidationError,
                        "sweep.axis must be a numeric params.* or ic.* key");
    }
}

bool set_numeric(JobSpec& spec, std::string_view key, double value) {
    if (key == "params.dim" || key == "mode" || !setters().contains(key)) return false;
    if (!(key.starts_with("params.") || key.starts_with("ic.") || key.starts_with("run.") ||
          key.starts_with("grid.")))
        return false;
    // Integer-valued run keys go through the integer parser.
    std::string text = fmt_double(value);
    if (key == "run.sampleEvery" || key == "run.cnIterations" || key == "run.cnMaxIterations") {
        if (value != std::floor(value)) return false;
        text = std::to_string(static_cast<long long>(value));
    }
    setters().find(key)->second(spec, text, 0);
    return true;
}

std::string serialize_config(const JobSpec& s) {
    std::ostringstream out;
    auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
    kv("mode", to_string(s.mode));
    kv("params.gamma", fmt_double(s.params.gamma));
    kv("params.kappa", fmt_double(s.params.kappa));
    kv("params.g1", fmt_double(s.params.g1));
    kv("params.g2", fmt_double(s.params.g2));
    kv("params.g", fmt_double(s.params.g));
    kv("params.dim", std::to_string(s.params.dim));
    kv("ic.A", fmt_double(s.ic.ampU));
    kv("ic.B", fmt_double(s.ic.ampV));
    kv("ic.a", fmt_double(s.ic.widthU));
    kv("ic.b", fmt_double(s.ic.widthV));
    kv("grid.L", fmt_double(s.gridL));
    kv("grid.dr", fmt_double(s.gridDr));
    kv("run.dt0", fmt_double(s.run.dt0));
    kv("run.dtMin", fmt_double(s.run.dtMin));
    kv("run.blowupRatio", fmt_double(s.run.blowupRatio));
    kv("run.followRatio", fmt_double(s.run.followRatio));
    kv("run.tMax", fmt_double(s.run.tMax));
    kv("run.sampleEvery", std::to_string(s.run.sampleEvery));
    kv("run.cnIterations", std::to_string(s.run.cnIterations));
    kv("run.cnMaxIterations", std::to_string(s.run.cnMaxIterations));
    kv("run.cnTolerance", fmt_double(s.run.cnTolerance));
    kv("run.peakChangeLimit", fmt_double(s.run.peakChangeLimit));
    kv("criteria.kind", to_string(s.criterion));
    if (s.horizon) kv("criteria.horizon", fmt_double(*s.horizon));
    kv("criteria.samples", std::to_string(s.samples));
    if (s.sweepAxis) {
        kv("sweep.axis", s.sweepAxis->name);
        std::string values;
        for (std::size_t i = 0; i < s.sweepAxis->values.size(); ++i)
            values += (i ? ", " : "") + fmt_double(s.sweepAxis->values[i]);
        kv("sweep.values", values);
    }
    kv("sweep.task", to_string(s.sweepTask));
    if (!s.figureId.empty()) kv("figure.id", s.figureId);
    kv("convergence.refinements", std::to_string(s.refinements));
    kv("output.dir", s.outputDir);
    kv("workers", std::to_string(s.workers));
    return out.str();
}

} // namespace ptnls
