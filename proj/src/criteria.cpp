#include "ptnls/criteria.hpp"

#include "ptnls/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptnls {

namespace {

constexpr double kSupRelTol = 1e-10;
constexpr double kGolden = 0.6180339887498949;

double dim_of(const SystemParams& params) { return static_cast<double>(params.dim); }

void require_supercritical(const SystemParams& params) {
    if (params.dim < 3)
        throw Error(ErrorKind::RegimeViolation, "blowup criteria require dim >= 3");
}

template <class Fn>
double golden_max(const Fn& f, double lo, double hi) {
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max({f1, f2, f(lo), f(hi)});
}

/// sup of f on [a, b]: uniform samples doubled until the max settles, then a
/// golden-section polish around the best sample.
template <class Fn>
double sup_on(const Fn& f, double a, double b) {
    if (!(b > a)) return f(a);
    auto scan = [&](std::size_t m, std::size_t& arg) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i <= m; ++i) {
            const double v = f(a + (b - a) * static_cast<double>(i) / static_cast<double>(m));
            if (v > best) {
                best = v;
                arg = i;
            }
        }
        return best;
    };
    std::size_t m = 16, arg = 0;
    double best = scan(m, arg);
    for (int level = 0; level < 12; ++level) {
        std::size_t next_arg = 0;
        const double next = scan(2 * m, next_arg);
        m *= 2;
        const bool settled = std::abs(next - best) <= kSupRelTol * std::max(1.0, std::abs(next));
        best = next;
        arg = next_arg;
        if (settled) break;
    }
    const double h = (b - a) / static_cast<double>(m);
    const double lo = std::max(a, a + h * (static_cast<double>(arg) - 1.0));
    const double hi = std::min(b, a + h * (static_cast<double>(arg) + 1.0));
    return std::max(best, golden_max(f, lo, hi));
}

template <class Fn>
class RunningSup {
public:
    explicit RunningSup(Fn f) : f_(std::move(f)), sup_(f_(0.0)) {}

    double peek(double t) const { return t > t_ ? std::max(sup_, sup_on(f_, t_, t)) : sup_; }

    double advance(double t) {
        if (t > t_) {
            sup_ = std::max(sup_, sup_on(f_, t_, t));
            t_ = t;
        }
        return sup_;
    }

private:
    Fn f_;
    double t_ = 0.0;
    double sup_;
};

template <class Pred>
double bisect_first_true(const Pred& pred, double lo, double hi) {
    // pred(lo) false, pred(hi) true; returns a point where pred holds.
    while (hi - lo > kTimeTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

/// Smallest T0 in (0, horizon] with F(T0) + 1 < 0 and M(T0) * bracket(T0) < 1,
/// where M is the running sup of F plus one and bracket is nondecreasing.
template <class FFn, class BFn>
std::optional<double> first_conjunction(const FFn& F, const BFn& bracket, double horizon,
                                        std::size_t samples) {
    auto G = [&](const RunningSup<FFn>& sup, double t) { return (sup.peek(t) + 1.0) * bracket(t); };

    // G is nondecreasing: locate where it first reaches 1.
    double end = horizon;
    bool capped = false;
    {
        RunningSup<FFn> sup(F);
        double prev = 0.0;
        for (std::size_t i = 1; i <= samples; ++i) {
            const double t = horizon * static_cast<double>(i) / static_cast<double>(samples);
            if (G(sup, t) >= 1.0) {
                RunningSup<FFn> base = sup;
                double lo = prev, hi = t;
                while (hi - lo > kTimeTolerance) {
                    const double mid = 0.5 * (lo + hi);
                    if (G(base, mid) >= 1.0)
                        hi = mid;
                    else
                        lo = mid;
                }
                end = lo;
                capped = true;
                break;
            }
            sup.advance(t);
            prev = t;
        }
    }
    if (!(end > 0.0)) return std::nullopt;

    // Candidate times: uniform samples, the minimiser of F, and the end point.
    std::vector<double> cand;
    cand.reserve(samples + 2);
    for (std::size_t i = 1; i < samples; ++i)
        cand.push_back(end * static_cast<double>(i) / static_cast<double>(samples));
    cand.push_back(end);
    {
        std::size_t arg = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cand.size(); ++i) {
            const double v = F(cand[i]);
            if (v < best) {
                best = v;
                arg = i;
            }
        }
        const double h = end / static_cast<double>(samples);
        const double lo = std::max(0.0, cand[arg] - h);
        const double hi = std::min(end, cand[arg] + h);
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
            const double x1 = b - kGolden * (b - a);
            const double x2 = a + kGolden * (b - a);
            if (F(x1) < F(x2))
                b = x2;
            else
                a = x1;
        }
        const double tmin = 0.5 * (a + b);
        if (tmin > 0.0) cand.push_back(tmin);
    }
    std::sort(cand.begin(), cand.end());

    RunningSup<FFn> sup(F);
    auto holds = [&](double t) {
        return F(t) + 1.0 < 0.0 && G(sup, t) < 1.0 && (!capped || t <= end);
    };
    double prev = 0.0;
    for (double t : cand) {
        if (holds(t)) {
            const double T0 = bisect_first_true(holds, prev, t);
            return T0;
        }
        sup.advance(t);
        prev = t;
    }
    return std::nullopt;
}

double theorem1_bracket(const CriterionConstants& c, const SystemParams&, double t) {
    return 0.5 * c.c1 * t * t + std::expm1(*c.beta * t);
}

double manakov_rate(const SystemParams& params) {
    const double n = dim_of(params);
    return 48.0 * n * params.gamma / (n + 2.0);
}

double manakov_bracket(const CriterionConstants& c, const SystemParams& params, double t) {
    return 0.5 * c.c1 * t * t + std::expm1(manakov_rate(params) * t);
}

void require_manakov(const SystemParams& params) {
    if (!is_manakov(params))
        throw Error(ErrorKind::NotManakov, "Manakov case requires g1 = g2 = g");
}

} // namespace

bool focusing_regime(const SystemParams& params) {
    return params.g1 > 0.0 && params.g2 > 0.0 && params.g > -std::sqrt(params.g1 * params.g2);
}

bool early_collapse_regime(const SystemParams& params) {
    return params.g1 > 0.0 && params.g2 <= 0.0 && params.g <= 0.0;
}

bool is_manakov(const SystemParams& params) {
    return params.g1 == params.g2 && params.g2 == params.g;
}

CriterionConstants constants(const SystemParams& params) {
    require_supercritical(params);
    const double n = dim_of(params);
    const double gamma = params.gamma, kappa = params.kappa;
    const double g1 = params.g1, g2 = params.g2, g = params.g;

    CriterionConstants c;
    c.c1 = 4.0 * gamma * kappa + 4.0 * gamma * gamma * (5.0 * n + 6.0) / (n - 2.0);
    c.c3 = 32.0 * n / (n + 2.0) * std::max({1.0, g1, g2});
    c.c4 = 2.0 * gamma * std::sqrt(kappa / gamma + (n + 2.0) / (n - 2.0));
    if (focusing_regime(params)) {
        if (g >= 0.0) {
            c.c2 = 0.8 * std::min({1.0, g1, g2});
        } else {
            const double r = std::sqrt(g1) / std::sqrt(g2);
            c.c2 = 0.8 * std::min({1.0, g1 + g * r, g2 + g / r});
        }
        c.beta = c.c3 * gamma / *c.c2;
    }
    return c;
}

CriterionConstants theorem1_constants(const SystemParams& params) {
    CriterionConstants c = constants(params);
    if (!c.c2)
        throw Error(ErrorKind::RegimeViolation,
                    "Theorem 1 needs g1 > 0, g2 > 0 and g > -sqrt(g1 g2)");
    return c;
}

const char* to_string(CriterionKind kind) {
    switch (kind) {
    case CriterionKind::Theorem1: return "Theorem1";
    case CriterionKind::Lemma1: return "Lemma1";
    case CriterionKind::Lemma2: return "Lemma2";
    case CriterionKind::Theorem2: return "Theorem2";
    case CriterionKind::Manakov: return "Manakov";
    }
    return "Unknown";
}

double default_horizon(const SystemParams& params) { return 4.0 / params.gamma; }

double F_function(const InitialFunctionals& initial, const SystemParams& params, double t) {
    const double n = dim_of(params);
    const double gamma = params.gamma;
    // e^{2 gamma t} - 2 gamma t - 1 without cancellation at small t
    const double x = 2.0 * gamma * t;
    const double tail = x < 1e-3 ? x * x * (0.5 + x / 6.0 + x * x / 24.0) : std::expm1(x) - x;
    return initial.msw + initial.mswRate * t + 8.0 * n / (n + 2.0) * initial.energy * t * t +
           4.0 * params.kappa / (gamma * gamma) * initial.stokes.s0 * tail;
}

double M_function(const InitialFunctionals& initial, const SystemParams& params, double t) {
    auto F = [&](double s) { return F_function(initial, params, s); };
    return sup_on(F, 0.0, t) + 1.0;
}

double G_function(const InitialFunctionals& initial, const SystemParams& params, double t) {
    const CriterionConstants c = theorem1_constants(params);
    return M_function(initial, params, t) * theorem1_bracket(c, params, t);
}

CriterionReport check_theorem1(const InitialFunctionals& initial, const SystemParams& params,
                               double horizon, std::size_t samples) {
    CriterionReport rep;
    rep.kind = CriterionKind::Theorem1;
    rep.constants = theorem1_constants(params);
    rep.inputs = initial;
    rep.horizon = horizon;
    if (!(horizon > 0.0) || samples < 2)
        throw Error(ErrorKind::ConfigInvalid, "horizon must be > 0 and samples >= 2");

    auto F = [&](double t) { return F_function(initial, params, t); };
    auto bracket = [&](double t) { return theorem1_bracket(rep.constants, params, t); };
    rep.certifiedTime = first_conjunction(F, bracket, horizon, samples);
    rep.satisfied = rep.certifiedTime.has_value();

    rep.columns = {"t", "F", "M", "G"};
    RunningSup<decltype(F)> sup(F);
    for (std::size_t i = 0; i <= samples; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(samples);
        const double M = sup.advance(t) + 1.0;
        rep.trace.push_back({t, F(t), M, M * bracket(t)});
    }
    return rep;
}

namespace {

LemmaThreshold lemma_common(const InitialFunctionals& initial, const SystemParams& params,
                            double C0) {
    const CriterionConstants c = theorem1_constants(params);
    LemmaThreshold th;
    th.beta = *c.beta;
    th.C0 = C0;
    const double b2 = th.beta * th.beta;
    const double X0 = initial.msw;
    th.T0max = std::log1p(b2 / ((1.0 + X0) * (b2 + c.c1))) / th.beta;
    th.Mtilde = 1.0 + X0 + C0 * std::expm1(2.0 * params.gamma * th.T0max);
    th.T0min = std::log1p(b2 / (th.Mtilde * (b2 + c.c1))) / th.beta;
    return th;
}

} // namespace

LemmaThreshold lemma1_threshold(const InitialFunctionals& initial, const SystemParams& params) {
    const double gamma = params.gamma;
    const double C0 = std::abs(initial.mswRate) / (2.0 * gamma) +
                      4.0 * params.kappa / (gamma * gamma) * initial.stokes.s0;
    LemmaThreshold th = lemma_common(initial, params, C0);
    const double n = dim_of(params);
    th.bound = -(n + 2.0) * th.Mtilde / (8.0 * n * th.T0min * th.T0min);
    th.satisfied = initial.energy < th.bound;
    return th;
}

LemmaThreshold lemma2_threshold(const InitialFunctionals& initial, const SystemParams& params) {
    const double gamma = params.gamma;
    const double n = dim_of(params);
    const double C0 = 4.0 * n * std::abs(initial.energy) / ((n + 2.0) * gamma * gamma) +
                      4.0 * params.kappa / (gamma * gamma) * initial.stokes.s0;
    LemmaThreshold th = lemma_common(initial, params, C0);
    th.bound = 8.0 * params.kappa * initial.stokes.s0 / gamma - th.Mtilde / th.T0min;
    th.satisfied = initial.mswRate < th.bound;
    return th;
}

double energy_bound(const InitialFunctionals& initial, const SystemParams& params, double t) {
    const double gamma = params.gamma;
    return (initial.energy + 2.0 * params.kappa * gamma * initial.stokes.s0 * t) *
           std::exp(2.0 * gamma * t);
}

double early_collapse_Z(const InitialFunctionals& initial, const SystemParams& params, double t) {
    if (!early_collapse_regime(params))
        throw Error(ErrorKind::RegimeViolation, "early collapse needs g1 > 0, g2 <= 0, g <= 0");
    const CriterionConstants c = constants(params);
    const double n = dim_of(params);
    const double gamma = params.gamma;
    const double S0 = initial.stokes.s0;
    const double c4 = c.c4;

    // Inner integrand e^{c4 s}(E_max(s) + kappa S0 e^{2 gamma s}) = e^{lam s}(a0 + a1 s).
    const double a0 = initial.energy + params.kappa * S0;
    const double a1 = 2.0 * params.kappa * gamma * S0;
    const double lam = c4 + 2.0 * gamma;
    const double b0 = a0 / lam - a1 / (lam * lam);
    const double b1 = a1 / lam;
    // c4 > 2 gamma for dim >= 3, so mu < 0.
    const double mu = 2.0 * gamma - c4;

    const double decay = -std::expm1(-2.0 * c4 * t) / (2.0 * c4); // int_0^t e^{-2 c4 s} ds
    // int_0^t e^{mu s}(b0 + b1 s) ds
    const double poly = b0 * std::expm1(mu * t) / mu +
                        b1 * (std::exp(mu * t) * (t / mu - 1.0 / (mu * mu)) + 1.0 / (mu * mu));
    const double K = initial.mswRate - c4 * initial.msw;
    return initial.msw + K * decay + 4.0 * n * (poly - b0 * decay);
}

CriterionReport check_theorem2(const InitialFunctionals& initial, const SystemParams& params,
                               double horizon, std::size_t samples) {
    if (!early_collapse_regime(params))
        throw Error(ErrorKind::RegimeViolation, "early collapse needs g1 > 0, g2 <= 0, g <= 0");
    if (!(horizon > 0.0) || samples < 2)
        throw Error(ErrorKind::ConfigInvalid, "horizon must be > 0 and samples >= 2");
    CriterionReport rep;
    rep.kind = CriterionKind::Theorem2;
    rep.constants = constants(params);
    rep.inputs = initial;
    rep.horizon = horizon;
    rep.columns = {"t", "Z", "Emax"};

    auto Z = [&](double t) { return early_collapse_Z(initial, params, t); };
    double prev = 0.0;
    for (std::size_t i = 0; i <= samples; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(samples);
        const double z = Z(t);
        rep.trace.push_back({t, z, energy_bound(initial, params, t)});
        if (!rep.certifiedTime && i > 0 && z <= 0.0)
            rep.certifiedTime = bisect_first_true([&](double s) { return Z(s) <= 0.0; }, prev, t);
        prev = t;
    }
    rep.satisfied = rep.certifiedTime.has_value();
    return rep;
}

double ManakovOscillation::s0_at(double t) const {
    return mean + S01 * std::cos(2.0 * omega * t) + S02 * std::sin(2.0 * omega * t);
}

ManakovInvariants manakov_invariants(const InitialFunctionals& initial,
                                     const SystemParams& params) {
    require_manakov(params);
    const StokesVector& s = initial.stokes;
    ManakovInvariants inv;
    inv.S1const = s.s1;
    inv.Sconst = params.kappa * s.s0 - params.gamma * s.s2;
    if (classify_phase(params) == PhaseLabel::Unbroken) {
        ManakovOscillation osc;
        osc.omega = std::sqrt(params.kappa * params.kappa - params.gamma * params.gamma);
        const double w2 = osc.omega * osc.omega;
        osc.mean = params.kappa * inv.Sconst / w2;
        osc.S01 = s.s0 - osc.mean;
        osc.S02 = params.gamma * s.s3 / osc.omega;
        osc.S01printed = s.s0 * (1.0 - params.kappa / w2) + s.s2 * params.gamma * params.kappa / w2;
        inv.oscillation = osc;
    }
    return inv;
}

double F_hat(const InitialFunctionals& initial, const SystemParams& params, double t) {
    const double n = dim_of(params);
    return initial.msw + initial.mswRate * t +
           8.0 * n / (n + 2.0) * (initial.energy - params.kappa * initial.stokes.s1) * t * t;
}

double M_hat(const InitialFunctionals& initial, const SystemParams& params, double t) {
    auto F = [&](double s) { return F_hat(initial, params, s); };
    return sup_on(F, 0.0, t) + 1.0;
}

double G_hat(const InitialFunctionals& initial, const SystemParams& params, double t) {
    require_manakov(params);
    const CriterionConstants c = constants(params);
    return M_hat(initial, params, t) * manakov_bracket(c, params, t);
}

CriterionReport check_manakov_theorem(const InitialFunctionals& initial,
                                      const SystemParams& params, double horizon,
                                      std::size_t samples) {
    require_manakov(params);
    if (!(params.g > 0.0))
        throw Error(ErrorKind::RegimeViolation, "Manakov criterion needs g1 = g2 = g > 0");
    if (!(horizon > 0.0) || samples < 2)
        throw Error(ErrorKind::ConfigInvalid, "horizon must be > 0 and samples >= 2");
    CriterionReport rep;
    rep.kind = CriterionKind::Manakov;
    rep.constants = constants(params);
    rep.inputs = initial;
    rep.horizon = horizon;

    auto F = [&](double t) { return F_hat(initial, params, t); };
    auto bracket = [&](double t) { return manakov_bracket(rep.constants, params, t); };
    rep.certifiedTime = first_conjunction(F, bracket, horizon, samples);
    rep.satisfied = rep.certifiedTime.has_value();

    rep.columns = {"t", "Fhat", "Mhat", "Ghat"};
    RunningSup<decltype(F)> sup(F);
    for (std::size_t i = 0; i <= samples; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(samples);
        const double M = sup.advance(t) + 1.0;
        rep.trace.push_back({t, F(t), M, M * bracket(t)});
    }
    return rep;
}

} // namespace ptnls
