#pragma once

// Empirical dimension estimators: exact covering sums over enumerated basic
// cylinders with root extraction, and a box-counting slope on sampled points
// (the latter is a labeled heuristic, excluded from any rigorous claim).

#include "cfdim/cantor.hpp"
#include "cfdim/logsum.hpp"
#include "cfdim/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

namespace cfdim {

struct CoverReport {
    long long depth = 0;
    double root = 0.0;              // s with sum |J_depth|^s = 1
    double sum_at_prediction = 0.0; // log of the sum at s = predicted
    double predicted = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
};

namespace detail {

// log-space sum of |J|^s over a cached array of log lengths, fixed 64-chunk
// reduction so the value is independent of the thread count.
inline double log_cover_sum(std::span<const double> logJ, double s, int threads) {
    const std::size_t nchunks = 64;
    std::vector<LogSumAcc> part(nchunks);
    const std::size_t n = logJ.size();
    run_chunks(nchunks, threads, [&](std::size_t c) {
        const std::size_t lo = n * c / nchunks, hi = n * (c + 1) / nchunks;
        for (std::size_t i = lo; i < hi; ++i) part[c].add(s * logJ[i]);
    });
    LogSumAcc total;
    for (auto& p : part) total.merge(p);
    return total.value();
}

} // namespace detail

/// Largest depth whose basic-cylinder count stays within the budget.
inline long long deepest_enumerable_depth(const CantorScheme& sch, std::uint64_t budget) {
    long long best = 0;
    for (long long d = 1; d <= sch.max_exact_depth(); ++d) {
        try {
            if (level_size(sch, d) > budget) break;
        } catch (const BudgetExceeded&) {
            break;
        }
        best = d;
    }
    if (best == 0) throw BudgetExceeded("no enumerable depth within budget");
    return best;
}

namespace detail {

// log |J_depth| per member of D_depth, lexicographic order. The length of a
// basic cylinder whose children span digits [v, V] is
// (V+1-v) / ((v q + q')((V+1) q + q')).
inline std::vector<double> collect_log_lengths(const CantorScheme& sch, long long depth, std::uint64_t budget) {
    if (sch.params.strict) throw UnsupportedError("strict schemes do not enumerate");
    const std::uint64_t count = level_size(sch, depth);
    if (count > budget) throw BudgetExceeded("covering enumeration exceeds budget");
    std::vector<double> logJ;
    logJ.reserve(count);
    auto walk = [&](auto&& self, long long pos, LogQ cur) -> void {
        if (pos == depth + 1) {
            auto [lo, hi] = child_range_exact(sch, pos);
            const double v = static_cast<double>(lo), V = static_cast<double>(hi);
            logJ.push_back(std::log(V + 1.0 - v) - cur.log_linear(v) - cur.log_linear(V + 1.0));
            return;
        }
        auto [lo, hi] = child_range_exact(sch, pos);
        for (std::int64_t d = lo; d <= hi; ++d) {
            LogQ next = cur;
            next.push(static_cast<double>(d));
            self(self, pos + 1, next);
        }
    };
    walk(walk, 1, LogQ{});
    return logJ;
}

} // namespace detail

/// log of sum |J_depth|^s over the order-`depth` basic cylinders.
inline double covering_sum_at(const CantorScheme& sch, long long depth, double s,
                              std::uint64_t budget = 2'000'000, int threads = 1) {
    auto logJ = detail::collect_log_lengths(sch, depth, budget);
    return detail::log_cover_sum(logJ, s, threads);
}

/// Exact covering sum over the order-`depth` basic cylinders of the scheme:
/// bisects sum |J_depth|^s = 1 and evaluates the sum at the theorem-predicted
/// dimension. Lengths come from the exact union formula evaluated on the
/// log-space continuant ladder.
inline CoverReport covering_root(const CantorScheme& sch, long long depth, double predicted,
                                 std::uint64_t budget = 2'000'000, int threads = 1) {
    auto logJ = detail::collect_log_lengths(sch, depth, budget);

    CoverReport rep;
    rep.depth = depth;
    rep.predicted = predicted;
    rep.sum_at_prediction = detail::log_cover_sum(logJ, predicted, threads);

    double lo = 0.0, hi = 1.0;
    if (detail::log_cover_sum(logJ, hi, threads) > 0)
        hi = 1.5; // disjoint subsets of [0,1) sum below 1, so this branch is unreachable
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (detail::log_cover_sum(logJ, mid, threads) > 0 ? lo : hi) = mid;
    }
    rep.root = 0.5 * (lo + hi);
    rep.bracket = {lo, hi};
    return rep;
}

inline nlohmann::json cover_report_json(const CoverReport& r) {
    nlohmann::json j;
    j["depth"] = r.depth;
    j["root"] = r.root;
    j["sum_at_prediction"] = r.sum_at_prediction;
    j["predicted"] = r.predicted;
    j["bracket"] = {r.bracket.first, r.bracket.second};
    return j;
}

inline std::string cover_csv(std::span<const CoverReport> rows) {
    std::string out = "depth,root,sum_at_prediction\n";
    char buf[64];
    auto put = [&](double v) {
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, r.ptr);
    };
    for (const auto& r : rows) {
        out += std::to_string(r.depth) + ",";
        put(r.root);
        out += ",";
        put(r.sum_at_prediction);
        out += "\n";
    }
    return out;
}

struct BoxCount {
    double slope = 0.0;
    double residual = 0.0;
    bool heuristic = true; // a finite-sample box count certifies nothing
};

/// Least-squares slope of log N(eps) against log(1/eps). DegenerateLadder on
/// a ladder that is not strictly decreasing in (0, 1).
inline BoxCount boxcount(std::span<const BigRat> points, std::span<const double> eps_ladder) {
    if (points.size() < 1000) throw std::invalid_argument("boxcount needs at least 10^3 points");
    if (eps_ladder.size() < 2) throw DegenerateLadderError("ladder needs at least two scales");
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        if (!(eps_ladder[i] > 0) || !(eps_ladder[i] < 1))
            throw DegenerateLadderError("scales must lie in (0,1)");
        if (i > 0 && eps_ladder[i] >= eps_ladder[i - 1])
            throw DegenerateLadderError("ladder must be strictly decreasing");
    }
    std::vector<double> xs, ys;
    xs.reserve(eps_ladder.size());
    ys.reserve(eps_ladder.size());
    for (double eps : eps_ladder) {
        std::set<long long> bins;
        for (const auto& p : points) bins.insert(static_cast<long long>(std::floor(to_double(p) / eps)));
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(std::log(static_cast<double>(bins.size())));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw DegenerateLadderError("ladder scales are numerically collinear");
    BoxCount bc;
    bc.slope = (n * sxy - sx * sy) / denom;
    const double icpt = (sy - bc.slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (bc.slope * xs[i] + icpt);
        rss += r * r;
    }
    bc.residual = std::sqrt(rss / n);
    return bc;
}

} // namespace cfdim
