#pragma once

// Piecewise dimension classification for the exceptional sets. Each classify_*
// returns a Verdict carrying the regime label, the dimension formula and its
// numeric value (or Empty / ZeroOrEmpty), a boundary flag for parameters on
// the excluded surfaces B1 = B2^2 and b1 = b2, and machine-checkable
// certificates for every Empty verdict.

#include "cfdim/growth.hpp"
#include "cfdim/pressure.hpp"

#include <json.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cfdim {

struct ClassifyConfig {
    SpectralConfig spectral{};
    double root_tol = 1e-10;
    long long horizon = 64;
    bool ladder = true; // M-ladder error estimate (raw fixed-M roots stay the reported values)
};

struct Verdict {
    enum class Kind { Dimension, Empty, ZeroOrEmpty };
    enum class Formula { None, One, SB, S0, G, OneOver1PlusB, MinSG, FLWW };

    Kind kind = Kind::Dimension;
    std::optional<double> value;
    Formula formula = Formula::None;
    std::string regime;
    bool boundary = false;
    std::vector<std::string> certificates;
    double solver_error = 0.0;
};

inline const char* kind_name(Verdict::Kind k) {
    switch (k) {
        case Verdict::Kind::Dimension: return "dimension";
        case Verdict::Kind::Empty: return "empty";
        case Verdict::Kind::ZeroOrEmpty: return "zero_or_empty";
    }
    return "?";
}

inline const char* formula_name(Verdict::Formula f) {
    switch (f) {
        case Verdict::Formula::None: return "none";
        case Verdict::Formula::One: return "one";
        case Verdict::Formula::SB: return "s_B";
        case Verdict::Formula::S0: return "s_0";
        case Verdict::Formula::G: return "g";
        case Verdict::Formula::OneOver1PlusB: return "1/(1+b)";
        case Verdict::Formula::MinSG: return "min{s,g}";
        case Verdict::Formula::FLWW: return "flww";
    }
    return "?";
}

inline nlohmann::json verdict_json(const Verdict& v) {
    nlohmann::json j;
    j["kind"] = kind_name(v.kind);
    if (v.value) j["value"] = *v.value;
    j["formula"] = formula_name(v.formula);
    j["regime"] = v.regime;
    j["boundary"] = v.boundary;
    j["certificates"] = v.certificates;
    j["solver_error"] = v.solver_error;
    return j;
}

namespace detail {

inline std::string fmt6(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

inline bool approx_eq_rel(double x, double y, double rel) {
    return std::abs(x - y) <= rel * std::max({1.0, std::abs(x), std::abs(y)});
}

} // namespace detail

/// A solver result together with its M-ladder diagnostics. `value` is the raw
/// root at the configured alphabet; `error` is the heuristic distance to the
/// infinite-alphabet value (extrapolation tail + last increment).
struct DimEstimate {
    double value = 0.0;
    double error = 0.0;
    std::vector<std::pair<int, double>> ladder;
};

inline DimEstimate estimate_dim(const Potential& pot, const ClassifyConfig& cfg) {
    // idempotent memo keyed by potential and solver configuration
    struct Key {
        int kind;
        double B, B1, B2, tol, iter_tol;
        int M, K;
        bool ladder;
        bool operator<(const Key& o) const {
            return std::tie(kind, B, B1, B2, tol, iter_tol, M, K, ladder) <
                   std::tie(o.kind, o.B, o.B1, o.B2, o.tol, o.iter_tol, o.M, o.K, o.ladder);
        }
    };
    static std::map<Key, DimEstimate> memo;
    static std::mutex mtx;
    Key key{static_cast<int>(pot.kind), pot.B,           pot.B1,
            pot.B2,                     cfg.root_tol,    cfg.spectral.iter_tol,
            cfg.spectral.alphabet_max,  cfg.spectral.nodes, cfg.ladder};
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }

    DimEstimate est;
    const int M = cfg.spectral.alphabet_max;
    SpectralConfig sc = cfg.spectral;
    if (cfg.ladder && M >= 16) {
        for (int m : {M / 4, M / 2, M}) {
            sc.alphabet_max = m;
            est.ladder.emplace_back(m, dim_root(pot, sc, cfg.root_tol));
        }
        est.value = est.ladder.back().second;
        auto ex = extrapolate_alphabet(est.ladder);
        est.error = (ex.value - est.value) + ex.error + cfg.root_tol;
    } else {
        est.value = dim_root(pot, sc, cfg.root_tol);
        est.ladder.emplace_back(M, est.value);
        est.error = 10 * cfg.root_tol;
    }
    std::lock_guard<std::mutex> lk(mtx);
    memo.emplace(key, est);
    return est;
}

// ---------------------------------------------------------------------------
// Single-function sets
// ---------------------------------------------------------------------------

inline Verdict classify_e1(const GrowthSpec& phi, const ClassifyConfig& cfg) {
    auto e = exponents(phi, Role::Phi1);
    Verdict v;
    if (e.B == 1.0) {
        v = {Verdict::Kind::Dimension, 1.0, Verdict::Formula::One, "E1:B=1", false, {}, 0.0};
    } else if (e.B == kInf) {
        v = {Verdict::Kind::Dimension, 1.0 / (1.0 + e.b), Verdict::Formula::OneOver1PlusB, "E1:B=inf", false, {}, 0.0};
    } else {
        auto est = estimate_dim(Potential::sb(e.B), cfg);
        v = {Verdict::Kind::Dimension, est.value, Verdict::Formula::SB, "E1:1<B<inf", false, {}, est.error};
    }
    return v;
}

inline Verdict classify_e2(const GrowthSpec& phi, const ClassifyConfig& cfg) {
    auto e = exponents(phi, Role::Phi1);
    Verdict v;
    if (e.B == 1.0) {
        v = {Verdict::Kind::Dimension, 1.0, Verdict::Formula::One, "E2:B=1", false, {}, 0.0};
    } else if (e.B == kInf) {
        v = {Verdict::Kind::Dimension, 1.0 / (1.0 + e.b), Verdict::Formula::OneOver1PlusB, "E2:B=inf", false, {}, 0.0};
    } else {
        auto est = estimate_dim(Potential::s0(e.B), cfg);
        v = {Verdict::Kind::Dimension, est.value, Verdict::Formula::S0, "E2:1<B<inf", false, {}, est.error};
    }
    return v;
}

inline Verdict classify_f(const GrowthSpec& phi, const ClassifyConfig& cfg) {
    auto e = exponents(phi, Role::Phi1);
    if (e.B == 1.0) throw UnsupportedError("F(Phi) classification requires B > 1");
    Verdict v;
    if (e.B == kInf) {
        v = {Verdict::Kind::Dimension, 1.0 / (1.0 + e.b), Verdict::Formula::OneOver1PlusB, "F:B=inf", false, {}, 0.0};
    } else {
        auto est = estimate_dim(Potential::s0(e.B), cfg);
        v = {Verdict::Kind::Dimension, est.value, Verdict::Formula::S0, "F:1<B<inf", false, {}, est.error};
    }
    return v;
}

// ---------------------------------------------------------------------------
// Two-function set F(Phi1, Phi2)
// ---------------------------------------------------------------------------

namespace detail {

enum class Feasible { Yes, No, Unknown };

// Constructive inner-set check on the excluded surface B1 = B2^2: windows
// a_n in [c1 B2^n, 2 c1 B2^n), a_{n+1} in [c2 B2^n, 2 c2 B2^n) must satisfy
//   c1 c2 B2^{2n} >= Phi1(n),  2 c1 B2^n <= Phi2(n-1),  2 c2 B2^n <= Phi2(n)
// for some constants c1, c2 at infinitely many n. Desk-scale test: constants
// must exist uniformly over the upper half of the horizon, with stationary
// envelopes.
inline Feasible boundary_sq_feasible(const GrowthSpec& phi1, const GrowthSpec& phi2, double B2, long long horizon,
                                     std::string& detail_out) {
    const double lB2 = std::log(B2);
    const double l2 = std::numbers::ln2;
    double sup_lo = kNegInf, inf_c1 = kInf, inf_c2 = kInf;
    double prev_lo = 0, prev_c1 = 0, prev_c2 = 0;
    bool stationary = true;
    const long long n0 = std::max<long long>(2, horizon / 2);
    for (long long n = n0; n <= horizon; ++n) {
        // upper envelope for the product floor, lower envelope for the caps
        double lo = log_eval_env(phi1, n, true) - 2.0 * n * lB2;   // log(c1 c2) >= lo
        double c1 = log_eval_env(phi2, n - 1, false) - l2 - n * lB2; // log c1 <= c1
        double c2 = log_eval_env(phi2, n, false) - l2 - n * lB2;     // log c2 <= c2
        if (!std::isfinite(lo) || !std::isfinite(c1) || !std::isfinite(c2)) return Feasible::Unknown;
        if (n > n0 && (std::abs(lo - prev_lo) > 1e-9 || std::abs(c1 - prev_c1) > 1e-9 ||
                       std::abs(c2 - prev_c2) > 1e-9))
            stationary = false;
        prev_lo = lo;
        prev_c1 = c1;
        prev_c2 = c2;
        sup_lo = std::max(sup_lo, lo);
        inf_c1 = std::min(inf_c1, c1);
        inf_c2 = std::min(inf_c2, c2);
    }
    if (!stationary) return Feasible::Unknown;
    detail_out = "log(c1*c2) >= " + fmt6(sup_lo) + ", log c1 <= " + fmt6(inf_c1) + ", log c2 <= " + fmt6(inf_c2);
    return sup_lo <= inf_c1 + inf_c2 + 1e-12 ? Feasible::Yes : Feasible::No;
}

} // namespace detail

/// Case dispatch given precomputed exponents; classify_f2 is the public
/// entry. Exposed separately so the unreachable-by-family cases (b1=b2=inf)
/// stay testable.
inline Verdict classify_f2_cases(const GrowthExponents& e1, const GrowthExponents& e2, const GrowthSpec& phi1,
                                 const GrowthSpec& phi2, const ClassifyConfig& cfg) {
    if (!e2.limit_exists) throw LimitMissingError("Phi2 exponents are not genuine limits");
    const double B1 = e1.B, B2 = e2.B, b1 = e1.b, b2 = e2.b;
    Verdict v;

    if (B1 != kInf) {
        if (B1 == 1.0) {
            // B1^{s0} = 1 <= B2 always; the s0 of a subexponential rate is 1
            v = {Verdict::Kind::Dimension, 1.0, Verdict::Formula::One, "F2:case1", false, {}, 0.0};
            v.certificates.push_back("B1=1 => s0=1");
            return v;
        }
        auto est0 = estimate_dim(Potential::s0(B1), cfg);
        const double lB1 = std::log(B1);
        const double curve = est0.value * lB1; // log of B1^{s0}
        const double band = std::max(est0.error, 1e-9) * lB1;

        if (B2 == kInf) {
            v = {Verdict::Kind::Dimension, est0.value, Verdict::Formula::S0, "F2:case1", false, {}, est0.error};
            v.certificates.push_back("interpretation: B2=inf with finite B1 treated as B1^{s0} <= B2");
            return v;
        }
        const double lB2 = std::log(B2);
        const bool on_sq = detail::approx_eq_rel(lB2, 0.5 * lB1, 1e-9);

        if (!on_sq && lB2 < 0.5 * lB1) {
            v = {Verdict::Kind::Empty, std::nullopt, Verdict::Formula::None, "F2:case3", false, {}, 0.0};
            v.certificates.push_back("theorem-case: sqrt(B1) > B2 with B2 finite: sqrt(B1)=" +
                                     detail::fmt6(std::exp(0.5 * lB1)) + ", B2=" + detail::fmt6(B2));
            return v;
        }
        if (on_sq) {
            v.boundary = true;
            std::string fdetail;
            auto fz = detail::boundary_sq_feasible(phi1, phi2, B2, cfg.horizon, fdetail);
            if (fz == detail::Feasible::Yes) {
                auto estg = estimate_dim(Potential::g(B1, B2), cfg);
                v.kind = Verdict::Kind::Dimension;
                v.value = estg.value;
                v.formula = Verdict::Formula::G;
                v.regime = "F2:boundary-B1=B2^2";
                v.solver_error = estg.error;
                v.certificates.push_back("window-feasible: " + fdetail);
                return v;
            }
            if (incompatibility_test(phi1, phi2, cfg.horizon) == Compat::EmptyForced) {
                v.kind = Verdict::Kind::Empty;
                v.regime = "F2:boundary-B1=B2^2";
                v.certificates.push_back("EmptyForced: Phi2(n)Phi2(n-1) <= Phi1(n) on [2," +
                                         std::to_string(cfg.horizon) + "] and persistently");
                return v;
            }
            v.kind = Verdict::Kind::ZeroOrEmpty;
            v.regime = "F2:boundary-B1=B2^2";
            v.certificates.push_back("boundary unresolved: window construction infeasible, no emptiness certificate");
            return v;
        }
        if (lB2 >= curve + band) {
            v = {Verdict::Kind::Dimension, est0.value, Verdict::Formula::S0, "F2:case1", false, {}, est0.error};
            return v;
        }
        if (lB2 > curve - band) {
            // within the solver's error band of B2 = B1^{s0}: both formulas agree there
            auto estg = estimate_dim(Potential::g(B1, B2), cfg);
            v = {Verdict::Kind::Dimension, est0.value, Verdict::Formula::S0, "F2:case1~case2", false, {},
                 std::max(est0.error, estg.error)};
            v.certificates.push_back("regime boundary B2 ~ B1^{s0}: s0=" + detail::fmt6(est0.value) +
                                     ", g=" + detail::fmt6(estg.value) +
                                     ", diff=" + detail::fmt6(std::abs(est0.value - estg.value)));
            return v;
        }
        auto estg = estimate_dim(Potential::g(B1, B2), cfg);
        v = {Verdict::Kind::Dimension, estg.value, Verdict::Formula::G, "F2:case2", false, {}, estg.error};
        return v;
    }

    // B1 = inf
    if (B2 != kInf) {
        v = {Verdict::Kind::Empty, std::nullopt, Verdict::Formula::None, "F2:case3", false, {}, 0.0};
        v.certificates.push_back("theorem-case: B1=inf so sqrt(B1) > B2 for finite B2=" + detail::fmt6(B2));
        return v;
    }
    if (b1 == kInf && b2 == kInf) {
        if (incompatibility_test(phi1, phi2, cfg.horizon) == Compat::EmptyForced) {
            v = {Verdict::Kind::Empty, std::nullopt, Verdict::Formula::None, "F2:case6", false, {}, 0.0};
            v.certificates.push_back("EmptyForced: Phi2(n)Phi2(n-1) <= Phi1(n) on [2," +
                                     std::to_string(cfg.horizon) + "] and persistently");
        } else {
            v = {Verdict::Kind::ZeroOrEmpty, std::nullopt, Verdict::Formula::None, "F2:case6", false, {}, 0.0};
            v.certificates.push_back("b1=b2=inf: dimension 0 when nonempty");
        }
        return v;
    }
    const bool b_equal = b1 != kInf && b2 != kInf && detail::approx_eq_rel(b1, b2, 1e-12);
    if (b_equal) {
        v.boundary = true;
        if (dominates_eventually(phi1, phi2, cfg.horizon)) {
            v.kind = Verdict::Kind::Dimension;
            v.value = 1.0 / (1.0 + b1);
            v.formula = Verdict::Formula::OneOver1PlusB;
            v.regime = "F2:boundary-b1=b2";
            v.certificates.push_back("Phi2 >= Phi1 eventually: F(Phi1,Phi1) subset forces 1/(1+b1)");
            return v;
        }
        if (incompatibility_test(phi1, phi2, cfg.horizon) == Compat::EmptyForced) {
            v.kind = Verdict::Kind::Empty;
            v.regime = "F2:boundary-b1=b2";
            v.certificates.push_back("EmptyForced: Phi2(n)Phi2(n-1) <= Phi1(n) on [2," +
                                     std::to_string(cfg.horizon) + "] and persistently");
            return v;
        }
        v.kind = Verdict::Kind::ZeroOrEmpty;
        v.regime = "F2:boundary-b1=b2";
        v.certificates.push_back("boundary unresolved: no subset witness, no emptiness certificate");
        return v;
    }
    if (b1 < b2 && b1 != kInf) {
        v = {Verdict::Kind::Dimension, 1.0 / (1.0 + b1), Verdict::Formula::OneOver1PlusB, "F2:case4", false, {}, 0.0};
        return v;
    }
    if (b1 > b2 && b2 != kInf) {
        v = {Verdict::Kind::Empty, std::nullopt, Verdict::Formula::None, "F2:case5", false, {}, 0.0};
        v.certificates.push_back("theorem-case: b1 > b2 with b2 finite: b1=" + detail::fmt6(b1) +
                                 ", b2=" + detail::fmt6(b2));
        return v;
    }
    v = {Verdict::Kind::ZeroOrEmpty, std::nullopt, Verdict::Formula::None, "F2:unclassified", false, {}, 0.0};
    return v;
}

inline Verdict classify_f2(const GrowthSpec& phi1, const GrowthSpec& phi2, const ClassifyConfig& cfg) {
    auto e1 = exponents(phi1, Role::Phi1);
    auto e2 = exponents(phi2, Role::Phi2);
    return classify_f2_cases(e1, e2, phi1, phi2, cfg);
}

// ---------------------------------------------------------------------------
// F_{B1,B2} (exponential rates; the excluded surface is resolved here)
// ---------------------------------------------------------------------------

inline Verdict classify_fbb(double B1, double B2, const ClassifyConfig& cfg) {
    if (!(B1 > 1) || !(B2 > 1)) throw std::invalid_argument("classify_fbb needs B1, B2 > 1");
    const double lB1 = std::log(B1), lB2 = std::log(B2);
    Verdict v;
    const bool on_sq = detail::approx_eq_rel(lB2, 0.5 * lB1, 1e-9);
    if (on_sq || lB2 < 0.5 * lB1) {
        v = {Verdict::Kind::Empty, std::nullopt, Verdict::Formula::None, "FBB:empty", on_sq, {}, 0.0};
        v.certificates.push_back("theorem-case: sqrt(B1) >= B2: sqrt(B1)=" + detail::fmt6(std::exp(0.5 * lB1)) +
                                 ", B2=" + detail::fmt6(B2) +
                                 "; products a_n a_{n+1} < B2^{2n-1} <= B1^n");
        return v;
    }
    auto est0 = estimate_dim(Potential::s0(B1), cfg);
    const double curve = est0.value * lB1;
    const double band = std::max(est0.error, 1e-9) * lB1;
    if (lB2 >= curve + band) {
        v = {Verdict::Kind::Dimension, est0.value, Verdict::Formula::S0, "FBB:s0-region", false, {}, est0.error};
        return v;
    }
    if (lB2 > curve - band) {
        auto estg = estimate_dim(Potential::g(B1, B2), cfg);
        v = {Verdict::Kind::Dimension, est0.value, Verdict::Formula::S0, "FBB:s0~g-boundary", false, {},
             std::max(est0.error, estg.error)};
        v.certificates.push_back("regime boundary B2 ~ B1^{s0}: s0=" + detail::fmt6(est0.value) +
                                 ", g=" + detail::fmt6(estg.value) +
                                 ", diff=" + detail::fmt6(std::abs(est0.value - estg.value)));
        return v;
    }
    auto estg = estimate_dim(Potential::g(B1, B2), cfg);
    v = {Verdict::Kind::Dimension, estg.value, Verdict::Formula::G, "FBB:g-region", false, {}, estg.error};
    return v;
}

// ---------------------------------------------------------------------------
// E(A1, A2) and the two auxiliary dimension formulas
// ---------------------------------------------------------------------------

inline Verdict dim_ea(double A1, double A2, const ClassifyConfig& cfg) {
    if (!(A1 > 1) || !(A2 > 0)) throw std::invalid_argument("dim_ea needs A1 > 1, A2 > 0");
    if (!(A1 * A2 > 1)) throw UnsupportedError("dim_ea needs A1*A2 > 1");
    auto es = estimate_dim(Potential::sb(A1), cfg);
    auto eg = estimate_dim(Potential::g(A1 * A2, A1), cfg);
    Verdict v{Verdict::Kind::Dimension,
              std::min(es.value, eg.value),
              Verdict::Formula::MinSG,
              "EA:min",
              false,
              {},
              std::max(es.error, eg.error)};
    v.certificates.push_back("s_{A1}=" + detail::fmt6(es.value) + ", g_{A1A2,A1}=" + detail::fmt6(eg.value));
    return v;
}

/// 1/(b+1): common dimension of the single-quotient doubly-exponential sets.
inline double dim_luczak(double b) {
    if (!(b > 1)) throw std::invalid_argument("dim_luczak needs b > 1");
    return 1.0 / (b + 1.0);
}

/// liminf_n log(s_1...s_n) / (2 log(s_1...s_n) + log s_{n+1}) for the growth
/// families, in closed form with a numeric confirmation over [1, horizon].
inline double dim_flww(const GrowthSpec& seq, long long horizon = 60) {
    using F = GrowthSpec::Family;
    if (seq.family == F::Table) throw UnsupportedError("flww evaluator supports the closed-form families only");
    if (seq.family == F::Exponential && !(seq.B > 1))
        throw UnsupportedError("sequence must tend to infinity");
    validate(seq);
    double closed;
    switch (seq.family) {
        case F::PowerLaw:
        case F::Exponential: closed = 0.5; break;
        default: closed = 1.0 / (1.0 + seq.b); break;
    }
    // numeric confirmation: monitor the ratio until the log-values overflow
    double L = 0.0, ratio = closed;
    for (long long n = 1; n < horizon; ++n) {
        double ls = log_eval(seq, n);
        double ls_next = log_eval(seq, n + 1);
        if (!std::isfinite(ls) || !std::isfinite(ls_next) || !std::isfinite(L + ls)) break;
        L += ls;
        if (L > 0) ratio = L / (2 * L + ls_next);
    }
    if (std::abs(ratio - closed) > 0.1)
        throw NonConvergenceError("flww numeric confirmation diverges from closed form");
    return closed;
}

// ---------------------------------------------------------------------------
// SetSpec dispatch
// ---------------------------------------------------------------------------

struct SetSpec {
    enum class Variant { E1, E2, F, F2, FBB, EA };
    Variant variant = Variant::E1;
    GrowthSpec phi1, phi2;
    double B1 = 0, B2 = 0;         // FBB
    double A1 = 0, A2 = 0;         // EA
    double c1 = 1, c2 = 1;
};

inline Verdict classify(const SetSpec& set, const ClassifyConfig& cfg) {
    switch (set.variant) {
        case SetSpec::Variant::E1: return classify_e1(set.phi1, cfg);
        case SetSpec::Variant::E2: return classify_e2(set.phi1, cfg);
        case SetSpec::Variant::F: return classify_f(set.phi1, cfg);
        case SetSpec::Variant::F2: return classify_f2(set.phi1, set.phi2, cfg);
        case SetSpec::Variant::FBB: return classify_fbb(set.B1, set.B2, cfg);
        case SetSpec::Variant::EA: return dim_ea(set.A1, set.A2, cfg);
    }
    throw std::logic_error("unreachable");
}

} // namespace cfdim
