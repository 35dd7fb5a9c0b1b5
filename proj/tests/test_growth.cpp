#include "cfdim/growth.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace cfdim;

TEST_CASE("exponent extraction per family") {
    auto e = exponents(GrowthSpec::exponential(4.0), Role::Phi1);
    REQUIRE(e.B == 4.0);
    REQUIRE(e.b == 1.0);
    REQUIRE(e.limit_exists);

    auto d = exponents(GrowthSpec::doubly_exp(3.0), Role::Phi1);
    REQUIRE(d.B == kInf);
    REQUIRE(d.b == 3.0);

    auto p = exponents(GrowthSpec::power_law(2.0), Role::Phi2);
    REQUIRE(p.B == 1.0);
    REQUIRE(p.b == 1.0);
    REQUIRE(p.limit_kind == LimitKind::Lim);

    auto s = exponents(GrowthSpec::shifted_doubly_exp(2.0, 1.0, -1), Role::Phi1);
    REQUIRE(s.B == kInf);
    REQUIRE(s.b == 2.0);
}

TEST_CASE("exponents are scale invariant in the constant") {
    for (double c : {0.01, 1.0, 7.5, 1e6}) {
        auto e = exponents(GrowthSpec::exponential(4.0, c), Role::Phi1);
        REQUIRE(e.B == 4.0);
        REQUIRE(e.b == 1.0);
    }
}

TEST_CASE("table specs need a declared tail") {
    GrowthSpec t;
    t.family = GrowthSpec::Family::Table;
    t.samples = {1.0, 2.0, 3.0};
    REQUIRE_THROWS_AS(exponents(t, Role::Phi1), UnsupportedError);

    auto ok = GrowthSpec::table({1.0, 2.0, 3.0}, GrowthSpec::exponential(2.0));
    auto e = exponents(ok, Role::Phi2);
    REQUIRE(e.B == 2.0);
    REQUIRE(e.limit_exists);
}

TEST_CASE("oscillating table tails refuse the limit role") {
    auto osc = GrowthSpec::table_oscillating({2.0, 4.0}, GrowthSpec::exponential(2.0), GrowthSpec::exponential(8.0));
    auto e2 = exponents(osc, Role::Phi2);
    REQUIRE_FALSE(e2.limit_exists);
    auto e1 = exponents(osc, Role::Phi1);
    REQUIRE(e1.B == 2.0); // liminf follows the lower envelope
}

TEST_CASE("log_eval closed forms") {
    REQUIRE(log_eval(GrowthSpec::exponential(4.0), 3) == Catch::Approx(3 * std::log(4.0)));
    REQUIRE(log_eval(GrowthSpec::doubly_exp(2.0, 5.0), 10) == Catch::Approx(5.0 * 1024.0));
    REQUIRE(log_eval(GrowthSpec::power_law(2.0), 100) == Catch::Approx(2 * std::log(100.0)));
    REQUIRE_THROWS_AS(log_eval(GrowthSpec::power_law(2.0), 0), std::invalid_argument);
}

TEST_CASE("log_eval is strictly increasing in n") {
    const GrowthSpec specs[] = {GrowthSpec::power_law(0.5), GrowthSpec::exponential(1.2, 5.0),
                                GrowthSpec::doubly_exp(1.5, 0.1), GrowthSpec::shifted_doubly_exp(2.0, 1.0, -3)};
    for (const auto& g : specs) {
        double prev = log_eval(g, 1);
        for (long long n = 2; n <= 200; ++n) {
            const double cur = log_eval(g, n);
            if (!std::isfinite(cur)) break;
            REQUIRE(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("incompatibility fixtures") {
    // doubly exponential pair with a shifted bound
    REQUIRE(incompatibility_test(GrowthSpec::doubly_exp(2.0, 5.0), GrowthSpec::shifted_doubly_exp(2.0, 1.0, -1),
                                 50) == Compat::EmptyForced);
    // squared exponential rate: a_n a_{n+1} < B^{2n-1} <= B^{2n}
    REQUIRE(incompatibility_test(GrowthSpec::exponential(9.0), GrowthSpec::exponential(3.0), 50) ==
            Compat::EmptyForced);
    // reversed rates: the inequality fails at every n
    REQUIRE(incompatibility_test(GrowthSpec::exponential(2.0), GrowthSpec::exponential(4.0), 50) ==
            Compat::Inconclusive);
    REQUIRE_THROWS_AS(incompatibility_test(GrowthSpec::exponential(2.0), GrowthSpec::exponential(2.0), 1),
                      std::invalid_argument);
}

TEST_CASE("incompatibility persists across large horizons without overflow") {
    // log Phi values overflow double far below this horizon; the loglog
    // comparison path must still decide it
    REQUIRE(incompatibility_test(GrowthSpec::doubly_exp(3.0, 5.0), GrowthSpec::shifted_doubly_exp(3.0, 1.0, -1),
                                 100000) == Compat::EmptyForced);
}

TEST_CASE("dominance test") {
    REQUIRE(dominates_eventually(GrowthSpec::doubly_exp(2.0), GrowthSpec::doubly_exp(2.0), 64));
    REQUIRE(dominates_eventually(GrowthSpec::doubly_exp(2.0), GrowthSpec::doubly_exp(2.0, 3.0), 64));
    REQUIRE_FALSE(dominates_eventually(GrowthSpec::doubly_exp(2.0, 3.0), GrowthSpec::doubly_exp(2.0), 64));
    REQUIRE(dominates_eventually(GrowthSpec::exponential(2.0), GrowthSpec::exponential(4.0), 64));
    REQUIRE_FALSE(dominates_eventually(GrowthSpec::exponential(4.0), GrowthSpec::exponential(2.0), 64));
}

TEST_CASE("text syntax round trip is the identity") {
    for (const char* text : {"pow:a=2", "exp:B=4,c=1", "dexp:b=3,beta=1", "dexpshift:b=2,beta=1,k=-1"}) {
        REQUIRE(print_growth(parse_growth(text)) == text);
    }
    // random parameters survive the round trip bit for bit
    std::mt19937_64 rng(31);
    auto u = [&] { return 1.0 + 10.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int t = 0; t < 200; ++t) {
        GrowthSpec g;
        switch (rng() % 4) {
            case 0: g = GrowthSpec::power_law(u()); break;
            case 1: g = GrowthSpec::exponential(u() + 0.001, u()); break;
            case 2: g = GrowthSpec::doubly_exp(u() + 0.001, u()); break;
            default: g = GrowthSpec::shifted_doubly_exp(u() + 0.001, u(), static_cast<int>(rng() % 7) - 3); break;
        }
        auto back = parse_growth(print_growth(g));
        REQUIRE(back.family == g.family);
        REQUIRE(back.a == g.a);
        REQUIRE(back.B == g.B);
        REQUIRE(back.c == g.c);
        REQUIRE(back.b == g.b);
        REQUIRE(back.beta == g.beta);
        REQUIRE(back.k == g.k);
    }
}

TEST_CASE("parse errors") {
    REQUIRE_THROWS_AS(parse_growth("nope:a=1"), ParseError);
    REQUIRE_THROWS_AS(parse_growth("exp"), ParseError);
    REQUIRE_THROWS_AS(parse_growth("exp:B=abc"), ParseError);
    REQUIRE_THROWS_AS(parse_growth("pow:b=2"), ParseError);
    REQUIRE_THROWS_AS(parse_growth("exp:B=0.5"), std::invalid_argument); // fails validation
}
