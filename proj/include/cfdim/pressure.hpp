#pragma once

// Finite-alphabet pressure machinery. Two independent routes to the same
// quantities:
//   * direct_sum / root_finite: exact depth-first enumeration of cylinder
//     sums f_n(s) = sum over words of exp(n alpha(s)) q_n^{-2s}, the oracle;
//   * spectral_eigenvalue / dim_root: leading eigenvalue of the weighted
//     transfer operator on Chebyshev collocation nodes, the fast route.
// The dimensional numbers s_B, s_0 and g_{B1,B2} are the s-roots of the
// corresponding pressure equations.

#include "cfdim/cf.hpp"
#include "cfdim/errors.hpp"
#include "cfdim/logsum.hpp"
#include "cfdim/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace cfdim {

/// The per-symbol additive potential alpha(s). One parametrized family covers
/// the three dimensional numbers: the weight of a length-n word is
/// exp(n alpha(s)) q_n^{-2s}.
struct Potential {
    enum class Kind { SB, S0, G };
    Kind kind = Kind::SB;
    double B = 1.0;             // SB (B == 1 encodes the alpha == 0 bounded-type case), S0
    double B1 = 0.0, B2 = 0.0;  // G

    double alpha(double s) const {
        switch (kind) {
            case Kind::SB: return -s * std::log(B);
            case Kind::S0: return -s * s * std::log(B);
            case Kind::G: return -s * std::log(B1) + (1.0 - s) * std::log(B2);
        }
        return 0.0;
    }

    static Potential sb(double B) {
        if (!(B >= 1)) throw std::invalid_argument("sb needs B >= 1");
        Potential p;
        p.kind = Kind::SB;
        p.B = B;
        return p;
    }
    static Potential s0(double B) {
        if (!(B > 1)) throw std::invalid_argument("s0 needs B > 1");
        Potential p;
        p.kind = Kind::S0;
        p.B = B;
        return p;
    }
    static Potential g(double B1, double B2) {
        if (!(B1 > 1) || !(B2 > 1)) throw std::invalid_argument("g needs B1, B2 > 1");
        Potential p;
        p.kind = Kind::G;
        p.B1 = B1;
        p.B2 = B2;
        return p;
    }

    const char* name() const {
        switch (kind) {
            case Kind::SB: return "sB";
            case Kind::S0: return "s0";
            case Kind::G: return "g";
        }
        return "?";
    }
};

struct SumQuery {
    Potential potential;
    double s = 0.5;
    int depth = 1;
    int alphabet_max = 2;
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

namespace detail {

inline void check_budget(int depth, int M, std::uint64_t budget) {
    if (depth < 0 || M < 1) throw std::invalid_argument("depth >= 0 and alphabet_max >= 1 required");
    if (depth * std::log(static_cast<double>(M)) > std::log(static_cast<double>(budget)) + 1e-9)
        throw BudgetExceeded("word count " + std::to_string(M) + "^" + std::to_string(depth) +
                             " exceeds budget " + std::to_string(budget));
}

// Fixed chunk decomposition of the depth-first word enumeration: always split
// at the shallowest prefix depth giving >= 64 chunks, independent of the
// thread count, so reductions merge in a fixed tree.
inline int chunk_depth(int depth, int M) {
    int d = 0;
    double count = 1;
    while (d < depth && count < 64) {
        count *= M;
        ++d;
    }
    return d;
}

template <typename Leaf>
void dfs_logq(LogQ state, int remaining, int M, Leaf&& leaf) {
    if (remaining == 0) {
        leaf(state);
        return;
    }
    for (int a = 1; a <= M; ++a) {
        LogQ next = state;
        next.push(static_cast<double>(a));
        dfs_logq(next, remaining - 1, M, leaf);
    }
}

// Seed a LogQ with the digits of chunk index c in base M (most significant
// first), i.e. the lexicographic rank-c prefix of length d.
inline LogQ chunk_prefix_state(std::uint64_t c, int d, int M) {
    std::vector<int> digits(static_cast<std::size_t>(d));
    for (int i = d - 1; i >= 0; --i) {
        digits[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::uint64_t>(M)) + 1;
        c /= static_cast<std::uint64_t>(M);
    }
    LogQ st;
    for (int a : digits) st.push(static_cast<double>(a));
    return st;
}

} // namespace detail

/// log sum over all length-`depth` words with digits <= M of q_n^{-2s}, for
/// every s in `s_values`, in one enumeration pass. Fixed lexicographic
/// summation order per chunk and fixed chunk-merge order make the result
/// independent of the thread count.
inline std::vector<double> log_qsum_grid(int depth, int M, std::span<const double> s_values, int threads = 1,
                                         std::uint64_t budget = kDefaultBudget) {
    detail::check_budget(depth, M, budget);
    const std::size_t ns = s_values.size();
    if (depth == 0) return std::vector<double>(ns, 0.0); // only the empty word, q = 1

    const int d = detail::chunk_depth(depth, M);
    std::uint64_t nchunks = 1;
    for (int i = 0; i < d; ++i) nchunks *= static_cast<std::uint64_t>(M);

    std::vector<std::vector<LogSumAcc>> part(nchunks, std::vector<LogSumAcc>(ns));
    run_chunks(nchunks, threads, [&](std::size_t c) {
        auto& accs = part[c];
        LogQ st = detail::chunk_prefix_state(c, d, M);
        detail::dfs_logq(st, depth - d, M, [&](const LogQ& leaf) {
            for (std::size_t i = 0; i < ns; ++i) accs[i].add(-2.0 * s_values[i] * leaf.logq);
        });
    });

    std::vector<double> out(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        LogSumAcc total;
        for (std::uint64_t c = 0; c < nchunks; ++c) total.merge(part[c][i]);
        out[i] = total.value();
    }
    return out;
}

/// log f_n(s) with f_n(s) = sum over words of exp(n alpha(s)) q_n^{-2s}.
inline double direct_sum(const SumQuery& q, int threads = 1, std::uint64_t budget = kDefaultBudget) {
    const double s[1] = {q.s};
    double lq = log_qsum_grid(q.depth, q.alphabet_max, s, threads, budget)[0];
    return q.depth * q.potential.alpha(q.s) + lq;
}

/// All per-word log q_n values at a given depth, in lexicographic order.
inline std::vector<double> enumerate_logq(int depth, int M, int threads = 1,
                                          std::uint64_t budget = kDefaultBudget) {
    detail::check_budget(depth, M, budget);
    std::uint64_t total = 1;
    for (int i = 0; i < depth; ++i) total *= static_cast<std::uint64_t>(M);
    std::vector<double> out(total);
    if (depth == 0) return out;
    const int d = detail::chunk_depth(depth, M);
    std::uint64_t nchunks = 1, per = total;
    for (int i = 0; i < d; ++i) nchunks *= static_cast<std::uint64_t>(M);
    per /= nchunks;
    run_chunks(nchunks, threads, [&](std::size_t c) {
        std::uint64_t idx = c * per;
        detail::dfs_logq(detail::chunk_prefix_state(c, d, M), depth - d, M,
                         [&](const LogQ& leaf) { out[idx++] = leaf.logq; });
    });
    return out;
}

/// Root of f_n(s) = 1 on s in [0, 1.5] by bisection; this is s_{n,B}(M) or
/// g_{n,B1,B2}(M) depending on the potential. Throws NoRootError when
/// f_n > 1 on the whole bracket (the digit-1 word alone can force that at
/// tiny n).
inline double root_finite(const Potential& pot, int depth, int M, double tol = 1e-10,
                          std::uint64_t budget = kDefaultBudget, int threads = 1) {
    if (depth < 1) throw std::invalid_argument("depth >= 1 required");
    auto logq = enumerate_logq(depth, M, threads, budget);
    auto log_f = [&](double s) {
        LogSumAcc acc;
        for (double lq : logq) acc.add(-2.0 * s * lq);
        return depth * pot.alpha(s) + acc.value();
    };
    double lo = 0.0, hi = 1.5;
    double fhi = log_f(hi);
    if (fhi > 0) throw NoRootError("f_n(s) > 1 for all s <= 1.5");
    if (log_f(lo) <= 0) return 0.0; // inf{s >= 0 : f <= 1} = 0
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (log_f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Spectral route: weighted transfer operator on Chebyshev-Lobatto collocation
// ---------------------------------------------------------------------------

struct SpectralConfig {
    int alphabet_max = 128;
    int nodes = 32;          // collocation node count K
    double iter_tol = 1e-12; // relative eigenvalue tolerance
    int max_iters = 500;
    bool verify_nodes = true; // re-solve at 2K and compare
};

namespace detail {

// Chebyshev-Lobatto nodes on [0,1] and barycentric weights.
struct ChebGrid {
    std::vector<double> x, w;
    explicit ChebGrid(int K) : x(static_cast<std::size_t>(K)), w(static_cast<std::size_t>(K)) {
        for (int j = 0; j < K; ++j) {
            x[static_cast<std::size_t>(j)] = 0.5 * (1.0 - std::cos(std::numbers::pi * j / (K - 1)));
            double wj = (j == 0 || j == K - 1) ? 0.5 : 1.0;
            w[static_cast<std::size_t>(j)] = (j % 2 == 0) ? wj : -wj;
        }
    }
};

// Row of the barycentric interpolation matrix: weights lambda_i with
// f(y) = sum_i lambda_i f(x_i).
inline void bary_row(const ChebGrid& grid, double y, std::span<double> row) {
    const std::size_t K = grid.x.size();
    double denom = 0.0;
    std::size_t hit = K;
    for (std::size_t i = 0; i < K; ++i) {
        double d = y - grid.x[i];
        if (d == 0.0) {
            hit = i;
            break;
        }
        row[i] = grid.w[i] / d;
        denom += row[i];
    }
    if (hit < K) {
        for (std::size_t i = 0; i < K; ++i) row[i] = 0.0;
        row[hit] = 1.0;
        return;
    }
    for (std::size_t i = 0; i < K; ++i) row[i] /= denom;
}

inline double power_iteration_log(const std::vector<double>& A, int K, double iter_tol, int max_iters) {
    const std::size_t n = static_cast<std::size_t>(K);
    std::vector<double> v(n, 1.0), u(n);
    double lam_prev = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iters; ++it) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            const double* row = &A[j * n];
            for (std::size_t i = 0; i < n; ++i) acc += row[i] * v[i];
            u[j] = acc;
        }
        double nrm = 0.0;
        for (double x : u) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NonConvergenceError("power iteration degenerated");
        for (std::size_t j = 0; j < n; ++j) v[j] = u[j] / nrm;
        if (it > 0 && std::abs(nrm - lam_prev) <= iter_tol * std::abs(nrm)) {
            // a few extra sweeps push the estimate to machine level, which the
            // node-doubling consistency check relies on
            if (++stable >= 6) return std::log(nrm);
        } else {
            stable = 0;
        }
        lam_prev = nrm;
    }
    throw NonConvergenceError("power iteration did not converge");
}

inline double spectral_log_eigenvalue_at(const Potential& pot, double s, int M, int K, double iter_tol,
                                         int max_iters) {
    const ChebGrid grid(K);
    const double ea = std::exp(pot.alpha(s));
    const std::size_t n = static_cast<std::size_t>(K);
    std::vector<double> A(n * n, 0.0);
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (int a = 1; a <= M; ++a) {
            const double ax = a + grid.x[j];
            const double wt = ea * std::exp(-2.0 * s * std::log(ax));
            bary_row(grid, 1.0 / ax, row);
            double* out = &A[j * n];
            for (std::size_t i = 0; i < n; ++i) out[i] += wt * row[i];
        }
    }
    return power_iteration_log(A, K, iter_tol, max_iters);
}

} // namespace detail

/// log of the leading eigenvalue of (L f)(x) = sum_{a<=M} e^{alpha(s)}
/// (a+x)^{-2s} f(1/(a+x)), i.e. the finite-alphabet pressure at s.
inline double spectral_eigenvalue(const Potential& pot, double s, const SpectralConfig& cfg) {
    if (cfg.nodes < 8) throw std::invalid_argument("nodes >= 8 required");
    if (cfg.alphabet_max < 1) throw std::invalid_argument("alphabet_max >= 1 required");
    if (!(cfg.iter_tol > 0)) throw std::invalid_argument("iter_tol > 0 required");
    double v = detail::spectral_log_eigenvalue_at(pot, s, cfg.alphabet_max, cfg.nodes, cfg.iter_tol, cfg.max_iters);
    if (cfg.verify_nodes) {
        double v2 = detail::spectral_log_eigenvalue_at(pot, s, cfg.alphabet_max, 2 * cfg.nodes, cfg.iter_tol,
                                                       cfg.max_iters);
        if (std::abs(v2 - v) > std::max(cfg.iter_tol, 64 * std::numeric_limits<double>::epsilon()))
            throw NodesTooSmallError("doubling collocation nodes moved log lambda by " + std::to_string(v2 - v));
    }
    return v;
}

/// Root of log lambda_M(s) = 0 on s in [0, 1]: the dimensional number s_B,
/// s_0 or g_{B1,B2} for the finite alphabet {1..M}. Pressure is strictly
/// decreasing in s, so the root is unique.
inline double dim_root(const Potential& pot, const SpectralConfig& cfg, double tol = 1e-10) {
    if (cfg.alphabet_max < 2) throw std::invalid_argument("dim_root needs alphabet_max >= 2");
    auto press = [&](double s) {
        return detail::spectral_log_eigenvalue_at(pot, s, cfg.alphabet_max, cfg.nodes, cfg.iter_tol, cfg.max_iters);
    };
    double lo = 0.0, hi = 1.0;
    if (press(lo) <= 0) throw NoRootError("pressure at s=0 is not positive");
    if (press(hi) >= 0) throw NoRootError("pressure at s=1 is not negative");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (press(mid) > 0 ? lo : hi) = mid;
    }
    double root = 0.5 * (lo + hi);
    if (cfg.verify_nodes) spectral_eigenvalue(pot, root, cfg); // node-doubling check at the root
    return root;
}

struct Extrapolation {
    double value; // last ladder value plus a geometric-tail estimate
    double error; // last increment; heuristic, not certified
};

/// Richardson-style alphabet extrapolation: dim values must be nondecreasing
/// in M (finite alphabets approximate from below); assumes geometric decay of
/// the increments.
inline Extrapolation extrapolate_alphabet(std::span<const std::pair<int, double>> ladder) {
    if (ladder.size() < 3) throw std::invalid_argument("ladder needs >= 3 entries");
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        if (ladder[i].first <= ladder[i - 1].first)
            throw std::invalid_argument("ladder M values must be strictly increasing");
        if (ladder[i].second < ladder[i - 1].second - 1e-6)
            throw MonotonicityViolation("dimension ladder decreases at M=" + std::to_string(ladder[i].first));
    }
    const std::size_t k = ladder.size() - 1;
    const double d_prev = std::max(0.0, ladder[k - 1].second - ladder[k - 2].second);
    const double d_last = std::max(0.0, ladder[k].second - ladder[k - 1].second);
    double tail = 0.0;
    if (d_prev > 0 && d_last > 0) {
        const double r = d_last / d_prev;
        if (r < 1.0) tail = d_last * r / (1.0 - r);
    }
    return {ladder[k].second + tail, d_last};
}

// ---------------------------------------------------------------------------
// CSV convergence tables
// ---------------------------------------------------------------------------

struct PressureRow {
    int M, K, n;
    double s, value;
    std::string method;
};

inline std::string pressure_csv(std::span<const PressureRow> rows) {
    std::string out = "M,K,n,s,value,method\n";
    char buf[64];
    auto put = [&](double v) {
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, r.ptr);
    };
    for (const auto& r : rows) {
        out += std::to_string(r.M) + "," + std::to_string(r.K) + "," + std::to_string(r.n) + ",";
        put(r.s);
        out += ",";
        put(r.value);
        out += "," + r.method + "\n";
    }
    return out;
}

} // namespace cfdim
