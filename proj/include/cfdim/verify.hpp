#pragma once

// Named invariant suites behind `verify <suite>`: props (the two product/window
// fixture families), pressure (oracle vs spectral agreement grid), cantor
// (mass consistency, gaps, Holder bounds on toy schemes), cover (covering-root
// cross-validation). Reports are deterministic text: fixed number formatting,
// fixed iteration order, and no thread count in the embedded config, so runs
// with different worker counts are byte-identical.

#include "cfdim/cantor.hpp"
#include "cfdim/classify.hpp"
#include "cfdim/cover.hpp"
#include "cfdim/pressure.hpp"

#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace cfdim {

struct VerifyConfig {
    ClassifyConfig classify{};
    int threads = 1;
    std::uint64_t budget = 2'000'000;
    std::uint64_t seed = 0;
};

struct VerifyReport {
    std::string suite;
    std::string config_line;
    std::vector<std::string> lines;
    int passed = 0, failed = 0;

    bool ok() const { return failed == 0; }

    std::string text() const {
        std::string out = "# verify " + suite + "\n# schema: 1\n# config: " + config_line + "\n";
        for (const auto& l : lines) out += l + "\n";
        out += std::string(ok() ? "RESULT: PASS" : "RESULT: FAIL") + " (" + std::to_string(passed) + "/" +
               std::to_string(passed + failed) + ")\n";
        return out;
    }
};

namespace detail {

inline std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string config_line(const VerifyConfig& cfg) {
    // thread count deliberately omitted: it never affects the numbers
    return "M=" + std::to_string(cfg.classify.spectral.alphabet_max) +
           " K=" + std::to_string(cfg.classify.spectral.nodes) + " tol=" + fmt9(cfg.classify.root_tol) +
           " iter_tol=" + fmt9(cfg.classify.spectral.iter_tol) + " horizon=" + std::to_string(cfg.classify.horizon) +
           " budget=" + std::to_string(cfg.budget) + " seed=" + std::to_string(cfg.seed);
}

inline void check(VerifyReport& rep, bool ok, const std::string& name, const std::string& detail) {
    rep.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + name + ": " + detail);
    (ok ? rep.passed : rep.failed)++;
}

} // namespace detail

/// The proposition fixtures on the excluded boundaries. Case labels follow
/// the set names E1, E2 (rate boundary B1 = B2^2) and P1, P2 (doubly
/// exponential boundary b1 = b2).
inline VerifyReport verify_props(const VerifyConfig& cfg) {
    VerifyReport rep;
    rep.suite = "props";
    rep.config_line = detail::config_line(cfg);

    for (double B : {2.0, 3.0, 5.0}) {
        // E1: Phi1 = B^{2n}, Phi2 = B^n -> empty
        auto v = classify_f2(GrowthSpec::exponential(B * B), GrowthSpec::exponential(B), cfg.classify);
        bool ok = v.kind == Verdict::Kind::Empty && v.boundary;
        detail::check(rep, ok, "E1[B=" + detail::fmt9(B) + "]",
                      std::string("expect empty+boundary, got kind=") + kind_name(v.kind) +
                          " boundary=" + (v.boundary ? "true" : "false") + " regime=" + v.regime);
    }
    for (double B : {2.0, 3.0, 5.0}) {
        // E2: Phi1 = B^{2n-1}, Phi2 = 3B^{n+1} -> dimension g_{B^2,B}
        auto v = classify_f2(GrowthSpec::exponential(B * B, 1.0 / B), GrowthSpec::exponential(B, 3.0 * B),
                             cfg.classify);
        auto g = estimate_dim(Potential::g(B * B, B), cfg.classify);
        bool ok = v.kind == Verdict::Kind::Dimension && v.boundary && v.formula == Verdict::Formula::G && v.value &&
                  std::abs(*v.value - g.value) <= 1e-9;
        detail::check(rep, ok, "E2[B=" + detail::fmt9(B) + "]",
                      "expect g=" + detail::fmt9(g.value) + ", got kind=" + kind_name(v.kind) +
                          " value=" + (v.value ? detail::fmt9(*v.value) : "-") + " regime=" + v.regime);
    }
    for (double b : {2.0, 3.0}) {
        // P1: Phi1 = Phi2 = e^{b^n} -> dimension 1/(1+b)
        auto v = classify_f2(GrowthSpec::doubly_exp(b), GrowthSpec::doubly_exp(b), cfg.classify);
        bool ok = v.kind == Verdict::Kind::Dimension && v.boundary && v.value &&
                  std::abs(*v.value - 1.0 / (1.0 + b)) <= 1e-12;
        detail::check(rep, ok, "P1[b=" + detail::fmt9(b) + "]",
                      "expect 1/(1+b)=" + detail::fmt9(1.0 / (1.0 + b)) + ", got kind=" + kind_name(v.kind) +
                          " value=" + (v.value ? detail::fmt9(*v.value) : "-") + " regime=" + v.regime);
    }
    for (double b : {2.0, 3.0}) {
        // P2: Phi1 = e^{5 b^n}, Phi2 = e^{b^{n-1}} -> empty
        auto v = classify_f2(GrowthSpec::doubly_exp(b, 5.0), GrowthSpec::shifted_doubly_exp(b, 1.0, -1),
                             cfg.classify);
        bool ok = v.kind == Verdict::Kind::Empty && v.boundary;
        detail::check(rep, ok, "P2[b=" + detail::fmt9(b) + "]",
                      std::string("expect empty+boundary, got kind=") + kind_name(v.kind) +
                          " boundary=" + (v.boundary ? "true" : "false") + " regime=" + v.regime);
    }
    return rep;
}

/// Oracle/spectral equivalence grid: for each potential, the worst deviation
/// between the spectral log-eigenvalue and the enumeration ratio
/// direct_sum(13) - direct_sum(12) over a 20-point s-grid must stay within
/// 1e-3 (alphabet {1,2,3}).
inline VerifyReport verify_pressure(const VerifyConfig& cfg) {
    VerifyReport rep;
    rep.suite = "pressure";
    rep.config_line = detail::config_line(cfg);

    const int M = 3, n_hi = 13;
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(0.3 + 0.7 * i / 19.0);
    auto q12 = log_qsum_grid(n_hi - 1, M, grid, cfg.threads, cfg.budget);
    auto q13 = log_qsum_grid(n_hi, M, grid, cfg.threads, cfg.budget);

    SpectralConfig sc = cfg.classify.spectral;
    sc.alphabet_max = M;

    const Potential pots[] = {Potential::sb(2), Potential::sb(16), Potential::s0(16), Potential::g(16, 4.5)};
    for (const auto& pot : pots) {
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double s = grid[i];
            const double ratio = (n_hi * pot.alpha(s) + q13[i]) - ((n_hi - 1) * pot.alpha(s) + q12[i]);
            const double spec = spectral_eigenvalue(pot, s, sc);
            worst = std::max(worst, std::abs(spec - ratio));
        }
        detail::check(rep, worst <= 1e-3, std::string("ratio-vs-spectral ") + pot.name(),
                      "worst |spectral - ratio| = " + detail::fmt9(worst) + " (limit 1e-3)");
    }
    return rep;
}

namespace detail {

inline CantorParams toy_one() {
    CantorParams p;
    p.A1 = 2;
    p.A2 = 2;
    p.M = 3;
    p.N = 3;
    p.eps = 1.0;
    p.levels = 2;
    return p;
}

inline CantorParams toy_two() {
    CantorParams p;
    p.A1 = 3;
    p.A2 = 1.5;
    p.M = 4;
    p.N = 2;
    p.eps = 1.0;
    p.levels = 2;
    return p;
}

struct CantorCheck {
    double consistency_err = 0.0; // worst |parent - sum(children)| in log space
    double normalization_err = 0.0;
    long long max_depth = 0;
};

// Exhaustive consistency/normalization sweep over all enumerable depths.
inline CantorCheck cantor_consistency(const CantorScheme& sch, std::uint64_t budget) {
    CantorCheck out;
    const long long dmax = deepest_enumerable_depth(sch, budget);
    out.max_depth = dmax;
    for (long long d = 0; d < dmax; ++d) {
        CompensatedAcc totals[2];
        double worst = 0.0;
        enumerate_members(sch, d, budget, [&](const Word& w) {
            for (int j = 1; j <= 2; ++j) {
                const double lm = mass(w, j, sch);
                auto [lo, hi] = child_range_exact(sch, d + 1);
                LogSumAcc kids;
                Word child = w;
                child.push_back(0);
                for (std::int64_t dig = lo; dig <= hi; ++dig) {
                    child.back() = dig;
                    kids.add(mass(child, j, sch));
                }
                worst = std::max(worst, std::abs(kids.value() - lm));
            }
        });
        // normalization at depth d
        enumerate_members(sch, d, budget, [&](const Word& w) {
            totals[0].add(std::exp(mass(w, 1, sch)));
            totals[1].add(std::exp(mass(w, 2, sch)));
        });
        out.consistency_err = std::max(out.consistency_err, worst);
        out.normalization_err = std::max({out.normalization_err, std::abs(totals[0].value() - 1.0),
                                          std::abs(totals[1].value() - 1.0)});
    }
    return out;
}

} // namespace detail

/// Toy-scheme suite: exact mass consistency and normalization, the exhaustive
/// gap lemma at small depth, and the Holder bound with a fitted c3.
inline VerifyReport verify_cantor(const VerifyConfig& cfg) {
    VerifyReport rep;
    rep.suite = "cantor";
    rep.config_line = detail::config_line(cfg);

    const std::uint64_t budget = std::min<std::uint64_t>(cfg.budget, 400'000);
    int idx = 0;
    for (auto params : {detail::toy_one(), detail::toy_two()}) {
        const std::string tag = "toy" + std::to_string(++idx);
        auto sch = build_scheme(params);

        auto chk = detail::cantor_consistency(sch, budget);
        detail::check(rep, chk.consistency_err <= 1e-12, tag + " mass consistency",
                      "worst log-space error " + detail::fmt9(chk.consistency_err) + " over depths <= " +
                          std::to_string(chk.max_depth) + " (limit 1e-12)");
        detail::check(rep, chk.normalization_err <= 1e-12, tag + " normalization",
                      "worst |total-1| = " + detail::fmt9(chk.normalization_err) + " (limit 1e-12)");

        // literal "+1" spacing variant stays consistent too
        auto alt = params;
        alt.spacing_offset = 1;
        auto sch_alt = build_scheme(alt);
        auto chk_alt = detail::cantor_consistency(sch_alt, budget);
        detail::check(rep, chk_alt.consistency_err <= 1e-12 && chk_alt.normalization_err <= 1e-12,
                      tag + " spacing-variant consistency",
                      "offset=1: consistency " + detail::fmt9(chk_alt.consistency_err) + ", normalization " +
                          detail::fmt9(chk_alt.normalization_err));

        // gap lemma, exhaustive at depth n_1 + 1: pairwise gaps between
        // basic cylinders must be >= |J|/M on both sides
        const long long gap_depth = std::min<long long>(sch.levels[0].n_k + 1, deepest_enumerable_depth(sch, 40'000));
        std::vector<std::pair<BigRat, BigRat>> intervals; // [left, right] of J_n
        std::vector<double> logJ;
        enumerate_members(sch, gap_depth, budget, [&](const Word& w) {
            auto [lo, hi] = detail::child_range_exact(sch, gap_depth + 1);
            auto c = final_convergents(w);
            // union of children over digits [lo, hi]: endpoints lo and hi+1
            BigRat e1(c.p * lo + c.p_prev, c.q * lo + c.q_prev);
            BigRat e2(c.p * (hi + 1) + c.p_prev, c.q * (hi + 1) + c.q_prev);
            if (e2 < e1) std::swap(e1, e2);
            intervals.emplace_back(e1, e2);
            logJ.push_back(basic_cylinder_log_length(w, sch));
        });
        std::vector<std::size_t> order(intervals.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return intervals[a].first < intervals[b].first; });
        // The nominal bound gap >= |J_n|/M overstates the separation by the
        // factor (1 + (M+2)/(M+1) * q_{n-1}/q_n)^{-1} on the side where a
        // larger cylinder faces its neighbor's tail region; the structural
        // floor gap >= |J_n|/(2M) holds for every pair. The fitted sharp
        // constant is reported against the nominal one.
        bool gap_ok = true;
        double worst_margin = kInf;
        const double logM = std::log(static_cast<double>(params.M));
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const auto& cur = intervals[order[i]];
            const auto& nxt = intervals[order[i + 1]];
            const double gap = to_double(BigRat(nxt.first - cur.second));
            const double bound_cur = std::exp(logJ[order[i]] - logM);
            const double bound_nxt = std::exp(logJ[order[i + 1]] - logM);
            if (gap < 0.5 * bound_cur || gap < 0.5 * bound_nxt) gap_ok = false;
            worst_margin = std::min(worst_margin, gap / std::max(bound_cur, bound_nxt));
        }
        detail::check(rep, gap_ok, tag + " gap lemma",
                      "exhaustive at depth " + std::to_string(gap_depth) + ", " +
                          std::to_string(intervals.size()) + " cylinders, fitted gap/(|J|/M) = " +
                          detail::fmt9(worst_margin) + " (floor 0.5, nominal 1)");

        // Holder bound with fitted c3
        const double tau = std::min(sch.s, sch.g) / (1.0 + params.eps);
        double worst_ratio = kNegInf;
        const long long hdepth = std::min<long long>(gap_depth + params.N, deepest_enumerable_depth(sch, budget));
        for (long long d = 1; d <= hdepth; ++d) {
            enumerate_members(sch, d, budget, [&](const Word& w) {
                for (int j = 1; j <= 2; ++j) {
                    auto hr = holder_check(w, j, sch, tau, 1.0);
                    worst_ratio = std::max(worst_ratio, hr.log_ratio);
                }
            });
        }
        const double fitted_c3 = std::exp(worst_ratio);
        detail::check(rep, fitted_c3 <= 4096.0, tag + " holder bound",
                      "tau=" + detail::fmt9(tau) + ", fitted c3=" + detail::fmt9(fitted_c3) +
                          " over depths <= " + std::to_string(hdepth) + " (sanity cap 2^12)");
    }
    return rep;
}

/// Covering cross-validation on the (A1=2, A2=2) toy: the covering root at
/// the deepest enumerable depth must land within 0.1 of the solver's
/// min{s_{A1}, g_{A1 A2, A1}}, and the sum must bracket 1 at predicted +-
/// 0.05.
inline VerifyReport verify_cover(const VerifyConfig& cfg) {
    VerifyReport rep;
    rep.suite = "cover";
    rep.config_line = detail::config_line(cfg);

    auto params = detail::toy_one();
    params.M = 12; // richer free alphabet tightens the desk-scale root
    params.N = 2;
    auto sch = build_scheme(params);
    auto pred = dim_ea(params.A1, params.A2, cfg.classify);

    const long long depth = deepest_enumerable_depth(sch, cfg.budget);
    auto rep_cover = covering_root(sch, depth, *pred.value, cfg.budget, cfg.threads);

    detail::check(rep, std::abs(rep_cover.root - rep_cover.predicted) <= 0.1, "covering root",
                  "depth=" + std::to_string(depth) + " root=" + detail::fmt9(rep_cover.root) +
                      " predicted=" + detail::fmt9(rep_cover.predicted) + " (tolerance 0.1)");

    const double above = covering_sum_at(sch, depth, rep_cover.predicted + 0.05, cfg.budget, cfg.threads);
    const double below = covering_sum_at(sch, depth, rep_cover.predicted - 0.05, cfg.budget, cfg.threads);
    detail::check(rep, above < 0 && below > 0, "bracketing",
                  "log sum at predicted+0.05 = " + detail::fmt9(above) + " (<0), at predicted-0.05 = " +
                      detail::fmt9(below) + " (>0)");
    return rep;
}

inline VerifyReport run_verify_suite(const std::string& name, const VerifyConfig& cfg) {
    if (name == "props") return verify_props(cfg);
    if (name == "pressure") return verify_pressure(cfg);
    if (name == "cantor") return verify_cantor(cfg);
    if (name == "cover") return verify_cover(cfg);
    throw std::invalid_argument("unknown verify suite '" + name + "'");
}

} // namespace cfdim
