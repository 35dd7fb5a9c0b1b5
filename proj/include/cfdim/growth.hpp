#pragma once

// Closed-form growth functions Phi, exact extraction of the exponents
// B = exp(liminf log Phi(n)/n) and b = exp(liminf loglog Phi(n)/n), and the
// finite-horizon incompatibility test Phi2(n)Phi2(n-1) <= Phi1(n).
//
// Phi is symbolic, never an opaque callable: the liminf/lim distinction and
// the persistence of inequalities beyond any horizon are decided from the
// family, not from sampling.

#include "cfdim/errors.hpp"
#include "cfdim/logsum.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cfdim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct GrowthSpec {
    enum class Family { PowerLaw, Exponential, DoublyExp, ShiftedDoublyExp, Table };
    Family family = Family::PowerLaw;

    double a = 1.0;             // PowerLaw: Phi(n) = n^a, a > 0
    double c = 1.0, B = 2.0;    // Exponential: Phi(n) = c B^n, c > 0, B > 1
    double beta = 1.0, b = 2.0; // DoublyExp: Phi(n) = exp(beta b^n), beta > 0, b > 1
    int k = 0;                  // ShiftedDoublyExp: Phi(n) = exp(beta b^{n+k})

    std::vector<double> samples;                   // Table: explicit Phi(1..m)
    std::shared_ptr<GrowthSpec> tail_lo, tail_hi;  // declared tail; oscillating when both set and distinct

    static GrowthSpec power_law(double a) {
        GrowthSpec g;
        g.family = Family::PowerLaw;
        g.a = a;
        return g;
    }
    static GrowthSpec exponential(double B, double c = 1.0) {
        GrowthSpec g;
        g.family = Family::Exponential;
        g.B = B;
        g.c = c;
        return g;
    }
    static GrowthSpec doubly_exp(double b, double beta = 1.0) {
        GrowthSpec g;
        g.family = Family::DoublyExp;
        g.b = b;
        g.beta = beta;
        return g;
    }
    static GrowthSpec shifted_doubly_exp(double b, double beta, int k) {
        GrowthSpec g;
        g.family = Family::ShiftedDoublyExp;
        g.b = b;
        g.beta = beta;
        g.k = k;
        return g;
    }
    static GrowthSpec table(std::vector<double> samples, GrowthSpec tail) {
        GrowthSpec g;
        g.family = Family::Table;
        g.samples = std::move(samples);
        g.tail_lo = std::make_shared<GrowthSpec>(std::move(tail));
        return g;
    }
    static GrowthSpec table_oscillating(std::vector<double> samples, GrowthSpec lo, GrowthSpec hi) {
        GrowthSpec g;
        g.family = Family::Table;
        g.samples = std::move(samples);
        g.tail_lo = std::make_shared<GrowthSpec>(std::move(lo));
        g.tail_hi = std::make_shared<GrowthSpec>(std::move(hi));
        return g;
    }
};

inline void validate(const GrowthSpec& g) {
    using F = GrowthSpec::Family;
    switch (g.family) {
        case F::PowerLaw:
            if (!(g.a > 0)) throw std::invalid_argument("power law needs a > 0");
            break;
        case F::Exponential:
            if (!(g.B > 1) || !(g.c > 0)) throw std::invalid_argument("exponential needs B > 1, c > 0");
            break;
        case F::DoublyExp:
        case F::ShiftedDoublyExp:
            if (!(g.b > 1) || !(g.beta > 0)) throw std::invalid_argument("doubly exponential needs b > 1, beta > 0");
            break;
        case F::Table:
            if (g.samples.empty()) throw std::invalid_argument("table needs samples");
            for (double v : g.samples)
                if (!(v > 0)) throw std::invalid_argument("table samples must be positive");
            if (!g.tail_lo) throw UnsupportedError("table tail family undeclared");
            validate(*g.tail_lo);
            if (g.tail_hi) validate(*g.tail_hi);
            break;
    }
}

enum class Role { Phi1, Phi2 };
enum class LimitKind { Liminf, Lim };

struct GrowthExponents {
    double B = 1.0; // exp of lim(inf) log Phi(n)/n; +inf allowed
    double b = 1.0; // exp of lim(inf) loglog Phi(n)/n; >= 1
    LimitKind limit_kind = LimitKind::Liminf;
    bool limit_exists = true;
};

namespace detail {

struct ClosedExps {
    double B, b;
};

inline ClosedExps closed_exponents(const GrowthSpec& g) {
    using F = GrowthSpec::Family;
    switch (g.family) {
        case F::PowerLaw: return {1.0, 1.0};
        case F::Exponential: return {g.B, 1.0};
        case F::DoublyExp:
        case F::ShiftedDoublyExp: return {kInf, g.b};
        case F::Table: break;
    }
    throw std::logic_error("closed_exponents on table");
}

} // namespace detail

/// Exact exponents of a growth spec. Phi1 uses liminf (always defined);
/// Phi2 requires genuine limits, so an oscillating table tail reports
/// limit_exists = false.
inline GrowthExponents exponents(const GrowthSpec& g, Role role) {
    validate(g);
    GrowthExponents e;
    e.limit_kind = role == Role::Phi1 ? LimitKind::Liminf : LimitKind::Lim;
    if (g.family != GrowthSpec::Family::Table) {
        auto ce = detail::closed_exponents(g);
        e.B = ce.B;
        e.b = ce.b;
        e.limit_exists = true;
        return e;
    }
    auto lo = detail::closed_exponents(*g.tail_lo);
    if (!g.tail_hi) {
        e.B = lo.B;
        e.b = lo.b;
        e.limit_exists = true;
        return e;
    }
    auto hi = detail::closed_exponents(*g.tail_hi);
    e.B = std::min(lo.B, hi.B); // liminf follows the lower envelope
    e.b = std::min(lo.b, hi.b);
    e.limit_exists = lo.B == hi.B && lo.b == hi.b;
    return e;
}

namespace detail {

// log Phi(n) with tail selection for tables. May return +inf when
// beta * b^n exceeds double range; callers that care fall back to loglog.
inline double log_eval_env(const GrowthSpec& g, long long n, bool hi_tail) {
    using F = GrowthSpec::Family;
    switch (g.family) {
        case F::PowerLaw: return g.a * std::log(static_cast<double>(n));
        case F::Exponential: return std::log(g.c) + static_cast<double>(n) * std::log(g.B);
        case F::DoublyExp: return std::exp(std::log(g.beta) + static_cast<double>(n) * std::log(g.b));
        case F::ShiftedDoublyExp:
            return std::exp(std::log(g.beta) + static_cast<double>(n + g.k) * std::log(g.b));
        case F::Table:
            if (n >= 1 && static_cast<std::size_t>(n) <= g.samples.size())
                return std::log(g.samples[static_cast<std::size_t>(n) - 1]);
            return log_eval_env(hi_tail && g.tail_hi ? *g.tail_hi : *g.tail_lo, n, hi_tail);
    }
    return 0.0;
}

// log log Phi(n); exact for every family, finite wherever log Phi > 1.
inline double loglog_eval_env(const GrowthSpec& g, long long n, bool hi_tail) {
    using F = GrowthSpec::Family;
    switch (g.family) {
        case F::PowerLaw:
        case F::Exponential: {
            double lp = log_eval_env(g, n, hi_tail);
            return lp > 0 ? std::log(lp) : kNegInf;
        }
        case F::DoublyExp: return std::log(g.beta) + static_cast<double>(n) * std::log(g.b);
        case F::ShiftedDoublyExp:
            return std::log(g.beta) + static_cast<double>(n + g.k) * std::log(g.b);
        case F::Table:
            if (n >= 1 && static_cast<std::size_t>(n) <= g.samples.size()) {
                double lp = std::log(g.samples[static_cast<std::size_t>(n) - 1]);
                return lp > 0 ? std::log(lp) : kNegInf;
            }
            return loglog_eval_env(hi_tail && g.tail_hi ? *g.tail_hi : *g.tail_lo, n, hi_tail);
    }
    return 0.0;
}

} // namespace detail

/// log Phi(n). For doubly-exponential families the value itself can exceed
/// double range; +inf is returned there and the symbolic comparison paths
/// below stay exact through the loglog level.
inline double log_eval(const GrowthSpec& g, long long n) {
    if (n < 1) throw std::invalid_argument("log_eval requires n >= 1");
    validate(g);
    return detail::log_eval_env(g, n, /*hi_tail=*/false);
}

namespace detail {

// Asymptotic signature of log Phi(n) in one of three growth classes.
struct LogSig {
    enum class Cls { PolyLog = 0, Linear = 1, Expo = 2 } cls;
    double a = 0;               // PolyLog: a log n  (product form: a(log n + log(n-1)))
    bool product = false;
    double slope = 0, icpt = 0; // Linear: slope n + icpt
    double log_coef = 0, log_base = 0; // Expo: exp(log_coef + n log_base)
};

inline LogSig log_signature(const GrowthSpec& g, bool hi_tail) {
    using F = GrowthSpec::Family;
    LogSig s{};
    switch (g.family) {
        case F::PowerLaw:
            s.cls = LogSig::Cls::PolyLog;
            s.a = g.a;
            return s;
        case F::Exponential:
            s.cls = LogSig::Cls::Linear;
            s.slope = std::log(g.B);
            s.icpt = std::log(g.c);
            return s;
        case F::DoublyExp:
            s.cls = LogSig::Cls::Expo;
            s.log_coef = std::log(g.beta);
            s.log_base = std::log(g.b);
            return s;
        case F::ShiftedDoublyExp:
            s.cls = LogSig::Cls::Expo;
            s.log_coef = std::log(g.beta) + g.k * std::log(g.b);
            s.log_base = std::log(g.b);
            return s;
        case F::Table:
            return log_signature(hi_tail && g.tail_hi ? *g.tail_hi : *g.tail_lo, hi_tail);
    }
    return s;
}

// Signature of log(Phi(n) Phi(n-1)) derived from Phi's signature; exact for
// Linear and Expo, envelope form for PolyLog.
inline LogSig product_signature(const LogSig& s) {
    LogSig p = s;
    switch (s.cls) {
        case LogSig::Cls::PolyLog:
            p.product = true;
            return p;
        case LogSig::Cls::Linear:
            p.slope = 2 * s.slope;
            p.icpt = 2 * s.icpt - s.slope;
            return p;
        case LogSig::Cls::Expo:
            // beta(b^n + b^{n-1}) = beta(1 + 1/b) b^n
            p.log_coef = s.log_coef + std::log1p(std::exp(-s.log_base));
            return p;
    }
    return p;
}

inline double sig_log(const LogSig& s, long long n) {
    switch (s.cls) {
        case LogSig::Cls::PolyLog: {
            double v = s.a * std::log(static_cast<double>(n));
            if (s.product) v += s.a * std::log(static_cast<double>(n - 1));
            return v;
        }
        case LogSig::Cls::Linear: return s.slope * static_cast<double>(n) + s.icpt;
        case LogSig::Cls::Expo: return std::exp(s.log_coef + static_cast<double>(n) * s.log_base);
    }
    return 0.0;
}

inline double sig_loglog(const LogSig& s, long long n) {
    switch (s.cls) {
        case LogSig::Cls::Expo: return s.log_coef + static_cast<double>(n) * s.log_base;
        default: {
            double v = sig_log(s, n);
            return v > 0 ? std::log(v) : kNegInf;
        }
    }
}

// L(n) <= R(n), safe against +inf on either side.
inline bool sig_leq_at(const LogSig& L, const LogSig& R, long long n) {
    double l = sig_log(L, n), r = sig_log(R, n);
    if (std::isfinite(l) && std::isfinite(r)) return l <= r + 1e-12 * std::max(1.0, std::abs(r));
    if (!std::isfinite(l) && !std::isfinite(r)) {
        double ll = sig_loglog(L, n), rr = sig_loglog(R, n);
        return ll <= rr + 1e-12 * std::max(1.0, std::abs(rr));
    }
    return !std::isfinite(r); // only one infinite: <= holds iff it is R
}

// sup over n >= h of L(n+1) - L(n); +inf for Expo.
inline double increment_ub(const LogSig& s, long long h) {
    switch (s.cls) {
        case LogSig::Cls::PolyLog:
            if (s.product)
                return s.a * (std::log(static_cast<double>(h + 1)) - std::log(static_cast<double>(h - 1)));
            return s.a * std::log(static_cast<double>(h + 1) / static_cast<double>(h));
        case LogSig::Cls::Linear: return s.slope;
        case LogSig::Cls::Expo: return kInf;
    }
    return kInf;
}

// inf over n >= h of R(n+1) - R(n); only meaningful for Linear/Expo.
inline double increment_lb(const LogSig& s, long long h) {
    switch (s.cls) {
        case LogSig::Cls::Linear: return s.slope;
        case LogSig::Cls::Expo: {
            double lg = s.log_coef + static_cast<double>(h) * s.log_base + std::log(std::expm1(s.log_base));
            return std::exp(lg); // may be +inf, fine
        }
        case LogSig::Cls::PolyLog: return 0.0;
    }
    return 0.0;
}

enum class Persist { Always, NotAlways, Unknown };

// Does L(n) <= R(n) hold for every n >= horizon, given the family classes?
// The same-class cases are decided by leading/subleading comparison (the
// difference is monotone there); the cross-class cases use an increment
// domination argument anchored at the horizon.
inline Persist persistent_leq(const LogSig& L, const LogSig& R, long long horizon) {
    const int rl = static_cast<int>(L.cls), rr = static_cast<int>(R.cls);
    const double tol = 1e-12;
    if (rr > rl) {
        if (!sig_leq_at(L, R, horizon)) return Persist::NotAlways;
        return increment_lb(R, horizon) >= increment_ub(L, horizon) ? Persist::Always : Persist::Unknown;
    }
    if (rr < rl) return Persist::NotAlways;
    switch (L.cls) {
        case LogSig::Cls::PolyLog: {
            // L = a_L(log n [+ log(n-1)]), R = a_R log n.
            double al = L.product ? 2 * L.a : L.a;
            if (R.a >= al - tol) {
                // with the product form, a_R >= 2 a_L gives
                // d = (a_R - 2a_L) log n + a_L log(n/(n-1)) > 0 for every n
                return L.product || R.a >= al ? Persist::Always
                                              : (sig_leq_at(L, R, horizon) ? Persist::Always : Persist::NotAlways);
            }
            return Persist::NotAlways;
        }
        case LogSig::Cls::Linear: {
            if (R.slope > L.slope + tol)
                return sig_leq_at(L, R, horizon) ? Persist::Always : Persist::NotAlways;
            if (std::abs(R.slope - L.slope) <= tol)
                return R.icpt >= L.icpt - 1e-9 ? Persist::Always : Persist::NotAlways;
            return Persist::NotAlways;
        }
        case LogSig::Cls::Expo: {
            if (R.log_base > L.log_base + tol) {
                // d(n) >= 0 iff (coef_R/coef_L) b_R^n / b_L^n >= 1, increasing in n
                double l = L.log_coef + static_cast<double>(horizon) * L.log_base;
                double r = R.log_coef + static_cast<double>(horizon) * R.log_base;
                return l <= r + 1e-12 ? Persist::Always : Persist::NotAlways;
            }
            if (std::abs(R.log_base - L.log_base) <= tol)
                return R.log_coef >= L.log_coef - 1e-9 ? Persist::Always : Persist::NotAlways;
            return Persist::NotAlways;
        }
    }
    return Persist::Unknown;
}

// Phi2(n)Phi2(n-1) <= Phi1(n) at a single n, +inf safe (loglog fallback).
inline bool product_leq_at(const GrowthSpec& phi2, const GrowthSpec& phi1, long long n) {
    double l2a = log_eval_env(phi2, n, /*hi_tail=*/true);
    double l2b = log_eval_env(phi2, n - 1, /*hi_tail=*/true);
    double l1 = log_eval_env(phi1, n, /*hi_tail=*/false);
    if (std::isfinite(l2a) && std::isfinite(l2b)) {
        if (std::isfinite(l1)) return l2a + l2b <= l1 + 1e-12 * std::max(1.0, std::abs(l1));
        return true; // finite product vs infinite bound
    }
    if (!std::isfinite(l1)) {
        double ll = log_add(loglog_eval_env(phi2, n, true), loglog_eval_env(phi2, n - 1, true));
        double r = loglog_eval_env(phi1, n, false);
        return ll <= r + 1e-12 * std::max(1.0, std::abs(r));
    }
    return false;
}

} // namespace detail

enum class Compat { EmptyForced, Inconclusive };

/// EmptyForced certifies that Phi2(n)Phi2(n-1) <= Phi1(n) holds on
/// [2, horizon] and, symbolically, for every n beyond it. That inequality
/// makes the defining conditions of F(Phi1, Phi2) incompatible.
inline Compat incompatibility_test(const GrowthSpec& phi1, const GrowthSpec& phi2, long long horizon) {
    if (horizon < 2) throw std::invalid_argument("horizon >= 2 required");
    validate(phi1);
    validate(phi2);
    for (long long n = 2; n <= horizon; ++n)
        if (!detail::product_leq_at(phi2, phi1, n)) return Compat::Inconclusive;
    auto lhs = detail::product_signature(detail::log_signature(phi2, /*hi_tail=*/true));
    auto rhs = detail::log_signature(phi1, /*hi_tail=*/false);
    return detail::persistent_leq(lhs, rhs, horizon) == detail::Persist::Always ? Compat::EmptyForced
                                                                                : Compat::Inconclusive;
}

/// Phi_small(n) <= Phi_big(n) for all n in the upper half of the horizon and
/// symbolically beyond it.
inline bool dominates_eventually(const GrowthSpec& phi_small, const GrowthSpec& phi_big, long long horizon) {
    validate(phi_small);
    validate(phi_big);
    auto leq_at = [&](long long n) {
        double l = detail::log_eval_env(phi_small, n, true);
        double r = detail::log_eval_env(phi_big, n, false);
        if (std::isfinite(l) && std::isfinite(r)) return l <= r + 1e-12 * std::max(1.0, std::abs(r));
        if (!std::isfinite(l) && !std::isfinite(r)) {
            double ll = detail::loglog_eval_env(phi_small, n, true);
            double rr = detail::loglog_eval_env(phi_big, n, false);
            return ll <= rr + 1e-12 * std::max(1.0, std::abs(rr));
        }
        return !std::isfinite(r);
    };
    for (long long n = std::max<long long>(2, horizon / 2); n <= horizon; ++n)
        if (!leq_at(n)) return false;
    return detail::persistent_leq(detail::log_signature(phi_small, true), detail::log_signature(phi_big, false),
                                  horizon) == detail::Persist::Always;
}

// ---------------------------------------------------------------------------
// Text syntax: "pow:a=2", "exp:B=4,c=1", "dexp:b=3,beta=1",
// "dexpshift:b=2,beta=1,k=-1". parse . print is the identity, bit for bit.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v); // shortest round-trip form
    return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
    double v;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw ParseError("bad number '" + std::string(s) + "'");
    return v;
}

inline int parse_int(std::string_view s) {
    int v;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw ParseError("bad integer '" + std::string(s) + "'");
    return v;
}

} // namespace detail

inline std::string print_growth(const GrowthSpec& g) {
    using F = GrowthSpec::Family;
    using detail::fmt_double;
    switch (g.family) {
        case F::PowerLaw: return "pow:a=" + fmt_double(g.a);
        case F::Exponential: return "exp:B=" + fmt_double(g.B) + ",c=" + fmt_double(g.c);
        case F::DoublyExp: return "dexp:b=" + fmt_double(g.b) + ",beta=" + fmt_double(g.beta);
        case F::ShiftedDoublyExp:
            return "dexpshift:b=" + fmt_double(g.b) + ",beta=" + fmt_double(g.beta) + ",k=" + std::to_string(g.k);
        case F::Table: throw UnsupportedError("table specs have no text form");
    }
    throw std::logic_error("unreachable");
}

inline GrowthSpec parse_growth(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected '<family>:<params>'");
    std::string_view fam = text.substr(0, colon);
    std::string_view rest = text.substr(colon + 1);

    std::vector<std::pair<std::string_view, std::string_view>> kv;
    while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string_view item = comma == std::string_view::npos ? rest : rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value in growth spec");
        kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    auto get = [&](std::string_view key) -> std::string_view {
        for (auto& [k, v] : kv)
            if (k == key) return v;
        throw ParseError("missing parameter '" + std::string(key) + "'");
    };
    auto get_or = [&](std::string_view key, std::string_view def) -> std::string_view {
        for (auto& [k, v] : kv)
            if (k == key) return v;
        return def;
    };

    GrowthSpec g;
    if (fam == "pow") {
        g = GrowthSpec::power_law(detail::parse_double(get("a")));
    } else if (fam == "exp") {
        g = GrowthSpec::exponential(detail::parse_double(get("B")), detail::parse_double(get_or("c", "1")));
    } else if (fam == "dexp") {
        g = GrowthSpec::doubly_exp(detail::parse_double(get("b")), detail::parse_double(get_or("beta", "1")));
    } else if (fam == "dexpshift") {
        g = GrowthSpec::shifted_doubly_exp(detail::parse_double(get("b")), detail::parse_double(get_or("beta", "1")),
                                           detail::parse_int(get("k")));
    } else {
        throw ParseError("unknown growth family '" + std::string(fam) + "'");
    }
    validate(g);
    return g;
}

} // namespace cfdim
