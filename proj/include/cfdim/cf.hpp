#pragma once

// Exact continued fraction machinery: partial-quotient words, convergents,
// cylinder intervals and the Gauss-map expansion. Everything here is exact
// (arbitrary precision); the LogQ ladder provides the log-space shadow used
// by the enumeration kernels.

#include "cfdim/bigint.hpp"
#include "cfdim/errors.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace cfdim {

/// A finite word of partial quotients a_1..a_n. The empty word is the
/// order-0 cylinder [0,1).
using Word = std::vector<std::int64_t>;

inline void validate_word(const Word& w) {
    for (auto a : w)
        if (a < 1) throw std::invalid_argument("partial quotients must be >= 1");
}

struct Convergent {
    BigInt p;
    BigInt q;
};

/// Convergents (p_k, q_k) for k = 1..n, from the recurrence
/// p_{k+1} = a_{k+1} p_k + p_{k-1}, q_{k+1} = a_{k+1} q_k + q_{k-1}
/// seeded with p_{-1}=1, q_{-1}=0, p_0=0, q_0=1.
inline std::vector<Convergent> continuants(const Word& w) {
    validate_word(w);
    std::vector<Convergent> out;
    out.reserve(w.size());
    BigInt p_prev = 1, q_prev = 0, p = 0, q = 1;
    for (auto a : w) {
        BigInt pn = a * p + p_prev;
        BigInt qn = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = pn;
        q = qn;
        out.push_back({std::move(pn), std::move(qn)});
    }
    return out;
}

/// (p_{n-1}, q_{n-1}, p_n, q_n) for a word of length n (seeds for n = 0).
struct ConvergentPair {
    BigInt p_prev, q_prev, p, q;
};

inline ConvergentPair final_convergents(const Word& w) {
    validate_word(w);
    ConvergentPair c{1, 0, 0, 1}; // (p_{-1}, q_{-1}, p_0, q_0)
    for (auto a : w) {
        BigInt p = a * c.p + c.p_prev;
        BigInt q = a * c.q + c.q_prev;
        c.p_prev = std::move(c.p);
        c.q_prev = std::move(c.q);
        c.p = std::move(p);
        c.q = std::move(q);
    }
    return c;
}

/// Value p_n/q_n of the finite continued fraction [a_1, ..., a_n].
inline BigRat word_value(const Word& w) {
    auto c = final_convergents(w);
    if (c.q == 0) throw std::invalid_argument("empty word has no value");
    return BigRat(c.p, c.q);
}

struct CylinderInterval {
    BigRat left;
    BigRat right;
    enum class ClosedSide { Left, Right } closed;
    int order;

    BigRat length() const { return right - left; }

    bool contains(const BigRat& x) const {
        if (closed == ClosedSide::Left) return x >= left && x < right;
        return x > left && x <= right;
    }
};

/// The order-n cylinder of all x whose expansion starts with w. Endpoints are
/// p_n/q_n and the mediant (p_n+p_{n-1})/(q_n+q_{n-1}); for even n the
/// interval is [p/q, mediant), for odd n it is (mediant, p/q].
inline CylinderInterval cylinder(const Word& w) {
    if (w.empty()) throw std::invalid_argument("cylinder requires length >= 1");
    auto c = final_convergents(w);
    BigRat at_q(c.p, c.q);
    BigRat mediant(c.p + c.p_prev, c.q + c.q_prev);
    const bool even = w.size() % 2 == 0;
    if (even) return {at_q, mediant, CylinderInterval::ClosedSide::Left, static_cast<int>(w.size())};
    return {mediant, at_q, CylinderInterval::ClosedSide::Right, static_cast<int>(w.size())};
}

struct Expansion {
    Word digits;
    bool terminated; // T^k(x) hit 0 before the requested depth
};

/// Gauss-map expansion of an exact rational x in [0,1), up to `depth` digits.
/// Rationals terminate; the greedy algorithm never emits a trailing 1 on a
/// word of length >= 2, so the returned word is already canonical.
inline Expansion cf_expand(BigRat x, int depth) {
    if (x < 0 || x >= 1) throw std::invalid_argument("cf_expand requires 0 <= x < 1");
    Expansion e{{}, false};
    for (int k = 0; k < depth; ++k) {
        if (x == 0) {
            e.terminated = true;
            return e;
        }
        BigInt num = boost::multiprecision::numerator(x);
        BigInt den = boost::multiprecision::denominator(x);
        BigInt a = den / num; // floor(1/x), x in (0,1)
        e.digits.push_back(a.convert_to<std::int64_t>());
        x = BigRat(den - a * num, num); // 1/x - a
    }
    if (x == 0) e.terminated = true;
    return e;
}

/// q_{n+m}(u v) / (q_n(u) q_m(v)); always in [1, 2].
inline BigRat quasi_mult_ratio(const Word& u, const Word& v) {
    if (u.empty() || v.empty()) throw std::invalid_argument("quasi_mult_ratio requires non-empty words");
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    BigInt q_uv = final_convergents(uv).q;
    BigInt q_u = final_convergents(u).q;
    BigInt q_v = final_convergents(v).q;
    return BigRat(q_uv, q_u * q_v);
}

/// Log-space shadow of the continuant recurrence: carries log q_n and the
/// ratio q_{n-1}/q_n, so q never overflows. One digit costs one log().
struct LogQ {
    double logq = 0.0;   // log q_0 = 0
    double ratio = 0.0;  // q_{-1}/q_0 = 0

    void push(double a) {
        const double t = a + ratio;
        logq += std::log(t);
        ratio = 1.0 / t;
    }

    /// log(v*q_n + q_{n-1}) for v > 0, used for cylinder-union lengths.
    double log_linear(double v) const { return logq + std::log(v + ratio); }
};

} // namespace cfdim
