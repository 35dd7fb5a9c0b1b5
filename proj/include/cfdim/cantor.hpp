#pragma once

// The sparse Cantor construction: free digit blocks of length N with digits
// in {1..M}, interleaved with forced digit pairs at positions n_k, n_k+1
// whose digits live in geometric windows [c1 A1^{n_k}, 2 c1 A1^{n_k}) and
// [c2 A2^{n_k}, 2 c2 A2^{n_k}). Two mass distributions ride on the same
// cylinder tree:
//   mu1 block factor: q_N(w)^{-2s} A1^{-sN}
//   mu2 block factor: A1^N q_N(w)^{-2g} (A2 A1^2)^{-gN}
// with uniform splitting across each forced window. Block weight tables are
// normalized by their exact partition sums so consistency and normalization
// hold to machine precision (the attached roots s, g make those sums 1 up to
// root tolerance anyway).

#include "cfdim/cf.hpp"
#include "cfdim/errors.hpp"
#include "cfdim/logsum.hpp"
#include "cfdim/pressure.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cfdim {

struct CantorParams {
    double A1 = 2.0, A2 = 2.0;
    double c1 = 1.0, c2 = 1.0;
    int M = 3;           // free-digit cap
    int N = 3;           // block length
    double eps = 1.0;
    int levels = 2;      // how many forced pairs (k_max)
    int spacing_offset = 2; // n_k - n_{k-1} = ell_k N + offset for k >= 2; n_1 = ell_1 N + 1
    bool strict = false; // paper constants: symbolic windows only, no enumeration
};

struct SchemeLevel {
    long long ell = 0;
    long long n_k = 0;
    bool materialized = false;       // windows fit in int64 digit ranges
    std::int64_t w1_lo = 0, w1_hi = 0, w2_lo = 0, w2_hi = 0;
    double log_w1_lo = 0, log_w2_lo = 0; // log(c_i A_i^{n_k}), always available
};

namespace detail {

struct BlockTable {
    int len = 0;
    std::vector<double> logq;          // exact log q_len per word, lexicographic
    std::vector<double> logw1, logw2;  // normalized log weights
    std::vector<double> cum1;          // cumulative mu1 weights for sampling
    std::vector<double> pref1, pref2;  // prefix sums of weights (size count+1)
};

struct PositionInfo {
    enum class Kind { Free, Forced1, Forced2 } kind = Kind::Free;
    int table = 0;   // index into tables_ for Free
    int offset = 0;  // 0-based offset inside the block
    int level = 0;   // forced-pair level (0-based)
};

} // namespace detail

class CantorScheme {
public:
    CantorParams params;
    double s = 0.0; // root of sum (A1^N q_N^2)^{-s} = 1 over {1..M}^N
    double g = 0.0; // root of sum A1^N ((A1^2 A2)^N q_N^2)^{-g} = 1
    bool roots_are_surrogate = false; // strict mode: spectral N->infinity surrogates
    std::vector<SchemeLevel> levels;

    // filled by build_scheme
    std::vector<detail::BlockTable> tables;
    std::vector<detail::PositionInfo> positions; // 1-based digit index -> info (index 0 unused)

    long long max_depth() const { return static_cast<long long>(positions.size()) - 1; }

    /// Deepest position usable for enumeration/membership: every forced
    /// window up to it must be materialized.
    long long max_exact_depth() const {
        for (const auto& lv : levels)
            if (!lv.materialized) return lv.n_k - 1;
        return max_depth();
    }
};

namespace detail {

inline double pow_int(double base, long long e) {
    double r = 1.0;
    for (long long i = 0; i < e; ++i) r *= base;
    return r;
}

inline BlockTable make_block_table(int len, int M, double s, double g, double A1, double A2) {
    BlockTable t;
    t.len = len;
    std::uint64_t count = 1;
    for (int i = 0; i < len; ++i) count *= static_cast<std::uint64_t>(M);
    t.logq.resize(count);
    t.logw1.resize(count);
    t.logw2.resize(count);

    const double lA1 = std::log(A1);
    const double lA12A2 = std::log(A1 * A1 * A2);
    // exact q via int64 (len and M are toy-small)
    std::vector<int> digits(static_cast<std::size_t>(len), 1);
    for (std::uint64_t r = 0; r < count; ++r) {
        std::int64_t q = 1, q_prev = 0;
        std::uint64_t x = r;
        std::uint64_t scale = count / static_cast<std::uint64_t>(M);
        for (int i = 0; i < len; ++i) {
            int d = static_cast<int>(x / scale) + 1;
            x %= scale;
            if (i + 1 < len) scale /= static_cast<std::uint64_t>(M);
            std::int64_t qn = d * q + q_prev;
            q_prev = q;
            q = qn;
        }
        t.logq[r] = std::log(static_cast<double>(q));
        t.logw1[r] = -2.0 * s * t.logq[r] - s * len * lA1;
        t.logw2[r] = len * lA1 - 2.0 * g * t.logq[r] - g * len * lA12A2;
    }
    for (auto* w : {&t.logw1, &t.logw2}) {
        LogSumAcc z;
        for (double lw : *w) z.add(lw);
        const double lz = z.value();
        for (double& lw : *w) lw -= lz;
    }
    t.cum1.resize(count);
    t.pref1.resize(count + 1, 0.0);
    t.pref2.resize(count + 1, 0.0);
    CompensatedAcc a1, a2;
    for (std::uint64_t r = 0; r < count; ++r) {
        a1.add(std::exp(t.logw1[r]));
        a2.add(std::exp(t.logw2[r]));
        t.cum1[r] = a1.value();
        t.pref1[r + 1] = a1.value();
        t.pref2[r + 1] = a2.value();
    }
    return t;
}

} // namespace detail

/// Builds the sparse scheme: minimal ell_k satisfying
///   (2^{ell_k (N-1)/2})^{eps/2} >= prod_{t<k} (M+1)^{ell_t N} (A1 A2)^{sum_{i<=t} ell_i N + t},
/// positions n_k from the spacing rule, ceil-bounded integer windows, the
/// attached roots s and g, and the block weight tables.
inline CantorScheme build_scheme(const CantorParams& p, const SpectralConfig& spectral = {}) {
    if (!(p.A1 > 1) || !(p.A2 > 0) || !(p.c1 > 0) || !(p.c2 > 0))
        throw std::invalid_argument("need A1 > 1, A2 > 0, c1, c2 > 0");
    if (!(p.A1 * p.A2 > 1)) throw std::invalid_argument("need A1*A2 > 1");
    if (p.M < 3 || p.N < 2 || p.levels < 1 || p.levels > 4) throw std::invalid_argument("need M >= 3, N >= 2, 1 <= levels <= 4");
    if (p.spacing_offset != 1 && p.spacing_offset != 2) throw std::invalid_argument("spacing_offset must be 1 or 2");
    if (!(p.eps > 0)) throw std::invalid_argument("eps > 0 required");
    if (p.strict && (p.N - 1) * p.eps < 400.0)
        throw InfeasibleError("strict mode needs (2^{(N-1)/2})^{eps/2} >= 2^100, i.e. (N-1)*eps >= 400");

    CantorScheme sch;
    sch.params = p;

    if (p.strict) {
        sch.s = dim_root(Potential::sb(p.A1), spectral);
        sch.g = dim_root(Potential::g(p.A1 * p.A2, p.A1), spectral);
        sch.roots_are_surrogate = true;
    } else {
        sch.s = root_finite(Potential::sb(p.A1), p.N, p.M, 1e-12);
        sch.g = root_finite(Potential::g(p.A1 * p.A2, p.A1), p.N, p.M, 1e-12);
    }

    // sparse ladder
    const double lhs_coef = (p.N - 1) / 2.0 * (p.eps / 2.0) * std::numbers::ln2; // per unit ell_k
    const double lM1 = std::log(static_cast<double>(p.M) + 1.0);
    const double lA1A2 = std::log(p.A1 * p.A2);
    double rhs_log = 0.0;   // log of the product over t < k
    long long sum_ellN = 0; // sum_{i<=t} ell_i N while accumulating
    long long prev_n = 0;
    for (int k = 1; k <= p.levels; ++k) {
        long long ell = std::max<long long>(1, static_cast<long long>(std::ceil(rhs_log / lhs_coef - 1e-12)));
        if (ell > (1LL << 50)) throw InfeasibleError("ell_" + std::to_string(k) + " exceeds ladder budget");
        SchemeLevel lv;
        lv.ell = ell;
        lv.n_k = prev_n + ell * p.N + (k == 1 ? 1 : p.spacing_offset);
        if (lv.n_k > (1LL << 40)) throw InfeasibleError("n_k exceeds position budget");
        prev_n = lv.n_k;

        lv.log_w1_lo = std::log(p.c1) + lv.n_k * std::log(p.A1);
        lv.log_w2_lo = std::log(p.c2) + lv.n_k * std::log(p.A2);
        const double mag1 = lv.log_w1_lo + std::numbers::ln2;
        const double mag2 = lv.log_w2_lo + std::numbers::ln2;
        if (!p.strict && mag1 < 42.5 && mag2 < 42.5) { // 2 c A^{n_k} < ~3e18: digits fit in int64
            lv.w1_lo = static_cast<std::int64_t>(std::ceil(p.c1 * detail::pow_int(p.A1, lv.n_k)));
            lv.w1_hi = static_cast<std::int64_t>(std::ceil(2.0 * p.c1 * detail::pow_int(p.A1, lv.n_k))) - 1;
            lv.w2_lo = static_cast<std::int64_t>(std::ceil(p.c2 * detail::pow_int(p.A2, lv.n_k)));
            lv.w2_hi = static_cast<std::int64_t>(std::ceil(2.0 * p.c2 * detail::pow_int(p.A2, lv.n_k))) - 1;
            if (lv.w1_lo < 1 || lv.w2_lo < 1 || lv.w1_hi < lv.w1_lo || lv.w2_hi < lv.w2_lo)
                throw InfeasibleError("empty forced window at level " + std::to_string(k));
            lv.materialized = true;
        }
        sch.levels.push_back(lv);

        // accumulate the product for the next level
        sum_ellN += ell * p.N;
        rhs_log += ell * p.N * lM1 + (static_cast<double>(sum_ellN) + k) * lA1A2;
    }

    if (!p.strict) {
        // block tables: full blocks of length N, plus the remainder length
        // (N - 1) used by the literal "+1" spacing variant
        sch.tables.push_back(detail::make_block_table(p.N, p.M, sch.s, sch.g, p.A1, p.A2));
        if (p.spacing_offset == 1 && p.N >= 2)
            sch.tables.push_back(detail::make_block_table(p.N - 1, p.M, sch.s, sch.g, p.A1, p.A2));

        // position map: free run of level k covers [start, n_k - 1], then the
        // forced pair sits at n_k, n_k + 1
        sch.positions.resize(1); // index 0 unused
        long long last_used = 0; // last position already mapped
        for (std::size_t k = 0; k < sch.levels.size(); ++k) {
            const long long start = last_used + 1;
            const long long count = sch.levels[k].n_k - start;
            long long consumed = 0;
            while (consumed < count) {
                const bool remainder = (count - consumed) < p.N;
                if (remainder && (count - consumed) != p.N - 1)
                    throw std::logic_error("free run not decomposable into blocks");
                const int table = remainder ? 1 : 0;
                const int len = remainder ? p.N - 1 : p.N;
                for (int off = 0; off < len; ++off) {
                    detail::PositionInfo pi;
                    pi.kind = detail::PositionInfo::Kind::Free;
                    pi.table = table;
                    pi.offset = off;
                    sch.positions.push_back(pi);
                }
                consumed += len;
            }
            detail::PositionInfo f1;
            f1.kind = detail::PositionInfo::Kind::Forced1;
            f1.level = static_cast<int>(k);
            sch.positions.push_back(f1);
            detail::PositionInfo f2;
            f2.kind = detail::PositionInfo::Kind::Forced2;
            f2.level = static_cast<int>(k);
            sch.positions.push_back(f2);
            last_used = sch.levels[k].n_k + 1;
        }
    }
    return sch;
}

namespace detail {

inline std::uint64_t block_rank(const Word& w, std::size_t start, int len, int M, bool& ok) {
    std::uint64_t r = 0;
    for (int i = 0; i < len; ++i) {
        const auto d = w[start + static_cast<std::size_t>(i)];
        if (d < 1 || d > M) {
            ok = false;
            return 0;
        }
        r = r * static_cast<std::uint64_t>(M) + static_cast<std::uint64_t>(d - 1);
    }
    ok = true;
    return r;
}

// Shared walk for membership and mass. Returns false on a constraint
// violation; accumulates log mass for measure j (1 or 2) when lm != nullptr.
inline bool walk_word(const CantorScheme& sch, const Word& w, int j, double* lm) {
    if (static_cast<long long>(w.size()) > sch.max_depth()) return false;
    const int M = sch.params.M;
    double acc = 0.0;
    std::size_t i = 0;
    while (i < w.size()) {
        const auto& pi = sch.positions[i + 1];
        switch (pi.kind) {
            case PositionInfo::Kind::Free: {
                const auto& t = sch.tables[static_cast<std::size_t>(pi.table)];
                const std::size_t have = std::min<std::size_t>(w.size() - i, static_cast<std::size_t>(t.len));
                bool ok = true;
                const std::uint64_t r = block_rank(w, i, static_cast<int>(have), M, ok);
                if (!ok) return false;
                if (lm) {
                    if (have == static_cast<std::size_t>(t.len)) {
                        acc += (j == 1 ? t.logw1 : t.logw2)[r];
                    } else {
                        std::uint64_t span = 1;
                        for (std::size_t x = have; x < static_cast<std::size_t>(t.len); ++x)
                            span *= static_cast<std::uint64_t>(M);
                        const auto& pref = j == 1 ? t.pref1 : t.pref2;
                        const double m = pref[(r + 1) * span] - pref[r * span];
                        acc += std::log(m);
                    }
                }
                i += have;
                break;
            }
            case PositionInfo::Kind::Forced1:
            case PositionInfo::Kind::Forced2: {
                const auto& lv = sch.levels[static_cast<std::size_t>(pi.level)];
                if (!lv.materialized) throw NotInSchemeError("forced window too large to materialize");
                const bool first = pi.kind == PositionInfo::Kind::Forced1;
                const std::int64_t lo = first ? lv.w1_lo : lv.w2_lo;
                const std::int64_t hi = first ? lv.w1_hi : lv.w2_hi;
                const auto d = w[i];
                if (d < lo || d > hi) return false;
                if (lm) acc -= std::log(static_cast<double>(hi - lo + 1));
                ++i;
                break;
            }
        }
    }
    if (lm) *lm = acc;
    return true;
}

} // namespace detail

/// Exact test of the symbolic-space digit constraints for a prefix.
inline bool is_member_prefix(const Word& w, const CantorScheme& sch) {
    if (sch.params.strict) throw UnsupportedError("strict schemes do not enumerate");
    return detail::walk_word(sch, w, 1, nullptr);
}

/// log mu_j of the basic cylinder J_n(word). Intermediate orders are the
/// child-sums (prefix marginals of the block tables), so consistency is
/// exact by construction.
inline double mass(const Word& w, int j, const CantorScheme& sch) {
    if (sch.params.strict) throw UnsupportedError("strict schemes do not enumerate");
    if (j != 1 && j != 2) throw std::invalid_argument("j must be 1 or 2");
    double lm = 0.0;
    if (!detail::walk_word(sch, w, j, &lm)) throw NotInSchemeError("word violates the scheme constraints");
    return lm;
}

namespace detail {

// Digit range admissible at position pos (1-based), as exact int64 bounds.
inline std::pair<std::int64_t, std::int64_t> child_range_exact(const CantorScheme& sch, long long pos) {
    const auto& pi = sch.positions[static_cast<std::size_t>(pos)];
    switch (pi.kind) {
        case PositionInfo::Kind::Free: return {1, sch.params.M};
        case PositionInfo::Kind::Forced1: {
            const auto& lv = sch.levels[static_cast<std::size_t>(pi.level)];
            if (!lv.materialized) throw NotInSchemeError("forced window too large to materialize");
            return {lv.w1_lo, lv.w1_hi};
        }
        case PositionInfo::Kind::Forced2: {
            const auto& lv = sch.levels[static_cast<std::size_t>(pi.level)];
            if (!lv.materialized) throw NotInSchemeError("forced window too large to materialize");
            return {lv.w2_lo, lv.w2_hi};
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace detail

/// Exact log length of the basic cylinder J_n(word): the union of children
/// I_{n+1} over the admissible digit range [v, V] has length
/// (V+1-v) / ((v q_n + q_{n-1})((V+1) q_n + q_{n-1})).
inline double basic_cylinder_log_length(const Word& w, const CantorScheme& sch) {
    if (static_cast<long long>(w.size()) + 1 > sch.max_depth())
        throw std::invalid_argument("word too deep for the configured levels");
    auto [v, V] = detail::child_range_exact(sch, static_cast<long long>(w.size()) + 1);
    auto c = final_convergents(w);
    const BigInt den = (v * c.q + c.q_prev) * ((V + 1) * c.q + c.q_prev);
    return std::log(static_cast<double>(V + 1 - v)) - log_big(den);
}

/// A basic cylinder with its exact log length and the two-sided estimate
/// (1/8)(V - v)/(V v q_n^2) <= |J_n| <= (V + 1 - v)/(V v q_n^2) that the
/// per-order length bounds specialize, where [v, V] is the admissible digit
/// range at the next position.
struct BasicCylinder {
    Word word;
    long long order = 0;
    double log_len = 0.0;       // exact
    double log_lower = 0.0;     // estimate floor
    double log_upper = 0.0;     // estimate cap
};

inline BasicCylinder basic_cylinder(const Word& w, const CantorScheme& sch) {
    if (!is_member_prefix(w, sch)) throw NotInSchemeError("word violates the scheme constraints");
    BasicCylinder bc;
    bc.word = w;
    bc.order = static_cast<long long>(w.size());
    bc.log_len = basic_cylinder_log_length(w, sch);
    auto [v, V] = detail::child_range_exact(sch, bc.order + 1);
    auto c = final_convergents(w);
    const double base = -std::log(static_cast<double>(v)) - std::log(static_cast<double>(V)) -
                        2.0 * log_big(c.q);
    bc.log_lower = std::log(static_cast<double>(V - v)) - 3 * std::numbers::ln2 + base;
    bc.log_upper = std::log(static_cast<double>(V + 1 - v)) + base;
    return bc;
}

/// Nominal gap bound log(|J_n| / M) separating J_n(word) from the other
/// order-n basic cylinders. The separation each side is a neighbor's tail
/// region, which undercuts |J_n|/M by up to (1 + (M+2)/(M+1) q_{n-1}/q_n)^{-1}
/// when the neighbor is smaller; |J_n|/(2M) is the uniform floor and the
/// verify suite reports the fitted sharp constant.
inline double gap_lower_bound(const Word& w, const CantorScheme& sch) {
    if (!is_member_prefix(w, sch)) throw NotInSchemeError("word violates the scheme constraints");
    return basic_cylinder_log_length(w, sch) - std::log(static_cast<double>(sch.params.M));
}

struct HolderResult {
    bool ok;
    double log_ratio; // log( mu_j(J_n) / |J_n|^tau )
};

/// Checks mu_j(J_n(word)) <= c3 |J_n(word)|^tau and reports the ratio.
inline HolderResult holder_check(const Word& w, int j, const CantorScheme& sch, double tau, double c3) {
    const double lm = mass(w, j, sch);
    const double lj = basic_cylinder_log_length(w, sch);
    const double log_ratio = lm - tau * lj;
    return {log_ratio <= std::log(c3) + 1e-12, log_ratio};
}

/// Exact number of order-`depth` basic cylinders.
inline std::uint64_t level_size(const CantorScheme& sch, long long depth) {
    if (depth > sch.max_exact_depth()) throw NotInSchemeError("depth beyond materialized windows");
    long double total = 1.0L;
    std::uint64_t t = 1;
    for (long long pos = 1; pos <= depth; ++pos) {
        auto [lo, hi] = detail::child_range_exact(sch, pos);
        const std::uint64_t c = static_cast<std::uint64_t>(hi - lo + 1);
        total *= static_cast<long double>(c);
        if (total > 4.0e18L) throw BudgetExceeded("level size exceeds 2^62");
        t *= c;
    }
    return t;
}

/// Depth-first enumeration of D_depth; fn(word) at every leaf.
template <typename Fn>
void enumerate_members(const CantorScheme& sch, long long depth, std::uint64_t budget, Fn&& fn) {
    if (sch.params.strict) throw UnsupportedError("strict schemes do not enumerate");
    if (level_size(sch, depth) > budget) throw BudgetExceeded("enumeration exceeds budget");
    Word w;
    w.reserve(static_cast<std::size_t>(depth));
    auto rec = [&](auto&& self, long long pos) -> void {
        if (pos > depth) {
            fn(const_cast<const Word&>(w));
            return;
        }
        auto [lo, hi] = detail::child_range_exact(sch, pos);
        for (std::int64_t d = lo; d <= hi; ++d) {
            w.push_back(d);
            self(self, pos + 1);
            w.pop_back();
        }
    };
    rec(rec, 1);
}

struct SamplePoint {
    BigRat x;
    Word word;
};

/// Seeded draw of a depth-`depth` member: free blocks proportional to the
/// mu1 block weights, forced digits uniform in their windows. Returns the
/// exact cylinder midpoint. Identical seed gives identical output.
inline SamplePoint sample_point(const CantorScheme& sch, std::uint64_t seed, long long depth) {
    if (sch.params.strict) throw UnsupportedError("strict schemes do not sample");
    if (depth < 1 || depth > sch.max_exact_depth()) throw BudgetExceeded("depth beyond materialized windows");
    std::mt19937_64 rng(seed);
    auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    Word w;
    w.reserve(static_cast<std::size_t>(depth));
    long long pos = 1;
    while (pos <= depth) {
        const auto& pi = sch.positions[static_cast<std::size_t>(pos)];
        if (pi.kind == detail::PositionInfo::Kind::Free && pi.offset == 0) {
            const auto& t = sch.tables[static_cast<std::size_t>(pi.table)];
            const double u = u01() * t.cum1.back();
            std::uint64_t r = static_cast<std::uint64_t>(
                std::lower_bound(t.cum1.begin(), t.cum1.end(), u) - t.cum1.begin());
            if (r >= t.cum1.size()) r = t.cum1.size() - 1;
            // decode rank into digits, keep those within depth
            std::vector<std::int64_t> digits(static_cast<std::size_t>(t.len));
            std::uint64_t x = r;
            for (int i = t.len - 1; i >= 0; --i) {
                digits[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(x % sch.params.M) + 1;
                x /= static_cast<std::uint64_t>(sch.params.M);
            }
            for (int i = 0; i < t.len && pos <= depth; ++i, ++pos) w.push_back(digits[static_cast<std::size_t>(i)]);
        } else {
            auto [lo, hi] = detail::child_range_exact(sch, pos);
            const auto span = static_cast<double>(hi - lo + 1);
            std::int64_t d = lo + static_cast<std::int64_t>(u01() * span);
            if (d > hi) d = hi;
            w.push_back(d);
            ++pos;
        }
    }
    auto cyl = cylinder(w);
    return {(cyl.left + cyl.right) / 2, w};
}

inline nlohmann::json scheme_json(const CantorScheme& sch) {
    nlohmann::json j;
    j["A1"] = sch.params.A1;
    j["A2"] = sch.params.A2;
    j["c1"] = sch.params.c1;
    j["c2"] = sch.params.c2;
    j["M"] = sch.params.M;
    j["N"] = sch.params.N;
    j["eps"] = sch.params.eps;
    j["levels"] = sch.params.levels;
    j["spacing_offset"] = sch.params.spacing_offset;
    j["mode"] = sch.params.strict ? "strict" : "toy";
    j["s"] = sch.s;
    j["g"] = sch.g;
    j["roots_are_surrogate"] = sch.roots_are_surrogate;
    nlohmann::json lv = nlohmann::json::array();
    for (const auto& l : sch.levels) {
        nlohmann::json e;
        e["ell"] = l.ell;
        e["n_k"] = l.n_k;
        e["materialized"] = l.materialized;
        if (l.materialized) {
            e["w1"] = {l.w1_lo, l.w1_hi};
            e["w2"] = {l.w2_lo, l.w2_hi};
        }
        e["log_w1_lo"] = l.log_w1_lo;
        e["log_w2_lo"] = l.log_w2_lo;
        lv.push_back(e);
    }
    j["sparse"] = lv;
    return j;
}

} // namespace cfdim
