#pragma once

#include "ptnls/functionals.hpp"
#include "ptnls/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ptnls {

struct CriterionConstants {
    double c1 = 0;
    std::optional<double> c2; // only inside g1, g2 > 0, g > -sqrt(g1 g2)
    double c3 = 0;
    double c4 = 0;
    std::optional<double> beta; // c3 gamma / c2
};

/// True when g1 > 0, g2 > 0 and g > -sqrt(g1 g2).
bool focusing_regime(const SystemParams& params);
/// True when g1 > 0, g2 <= 0 and g <= 0.
bool early_collapse_regime(const SystemParams& params);
bool is_manakov(const SystemParams& params);

/// Throws RegimeViolation for dim < 3.
CriterionConstants constants(const SystemParams& params);
/// As constants(), but throws RegimeViolation when c2 is undefined.
CriterionConstants theorem1_constants(const SystemParams& params);

enum class CriterionKind { Theorem1, Lemma1, Lemma2, Theorem2, Manakov };

const char* to_string(CriterionKind kind);

struct CriterionReport {
    CriterionKind kind = CriterionKind::Theorem1;
    bool satisfied = false;
    std::optional<double> certifiedTime;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> trace;
    InitialFunctionals inputs;
    CriterionConstants constants;
    double horizon = 0;
};

// Theorem 1 family.
double F_function(const InitialFunctionals& initial, const SystemParams& params, double t);
/// sup of F over [0, t] plus one.
double M_function(const InitialFunctionals& initial, const SystemParams& params, double t);
double G_function(const InitialFunctionals& initial, const SystemParams& params, double t);

inline constexpr std::size_t kDefaultSamples = 4096;
inline constexpr double kTimeTolerance = 1e-9;

double default_horizon(const SystemParams& params);

CriterionReport check_theorem1(const InitialFunctionals& initial, const SystemParams& params,
                               double horizon, std::size_t samples = kDefaultSamples);

struct LemmaThreshold {
    double beta = 0;
    double C0 = 0;
    double T0max = 0;
    double T0min = 0;
    double Mtilde = 0; // M~(T0max)
    double bound = 0;  // E(0) bound (lemma 1) or Y(0) bound (lemma 2)
    bool satisfied = false;
};

LemmaThreshold lemma1_threshold(const InitialFunctionals& initial, const SystemParams& params);
LemmaThreshold lemma2_threshold(const InitialFunctionals& initial, const SystemParams& params);

// Early collapse.
double energy_bound(const InitialFunctionals& initial, const SystemParams& params, double t);
double early_collapse_Z(const InitialFunctionals& initial, const SystemParams& params, double t);
CriterionReport check_theorem2(const InitialFunctionals& initial, const SystemParams& params,
                               double horizon, std::size_t samples = kDefaultSamples);

// Manakov case g1 = g2 = g.
struct ManakovOscillation {
    double mean = 0;
    double S01 = 0;
    double S02 = 0;
    double omega = 0;
    double S01printed = 0;

    double s0_at(double t) const;
};

struct ManakovInvariants {
    double S1const = 0;
    double Sconst = 0; // kappa S0 - gamma S2
    std::optional<ManakovOscillation> oscillation; // unbroken phase only
};

ManakovInvariants manakov_invariants(const InitialFunctionals& initial, const SystemParams& params);

double F_hat(const InitialFunctionals& initial, const SystemParams& params, double t);
double M_hat(const InitialFunctionals& initial, const SystemParams& params, double t);
double G_hat(const InitialFunctionals& initial, const SystemParams& params, double t);
CriterionReport check_manakov_theorem(const InitialFunctionals& initial,
                                      const SystemParams& params, double horizon,
                                      std::size_t samples = kDefaultSamples);

} // namespace ptnls
