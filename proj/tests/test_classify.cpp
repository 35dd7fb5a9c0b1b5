#include "cfdim/classify.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace cfdim;

namespace {

ClassifyConfig small_cfg(int M = 64) {
    ClassifyConfig cc;
    cc.spectral.alphabet_max = M;
    return cc;
}

} // namespace

TEST_CASE("single-quotient set classification") {
    auto cfg = small_cfg();
    auto a = classify_e1(GrowthSpec::power_law(3.0), cfg);
    REQUIRE(a.kind == Verdict::Kind::Dimension);
    REQUIRE(*a.value == 1.0);

    auto b = classify_e1(GrowthSpec::doubly_exp(3.0), cfg);
    REQUIRE(*b.value == Catch::Approx(0.25));
    REQUIRE(b.formula == Verdict::Formula::OneOver1PlusB);

    auto c = classify_e1(GrowthSpec::exponential(4.0), cfg);
    REQUIRE(c.formula == Verdict::Formula::SB);
    REQUIRE(*c.value > 0.5);
    REQUIRE(*c.value < 1.0);
    REQUIRE(*c.value ==
            Catch::Approx(estimate_dim(Potential::sb(4.0), cfg).value).epsilon(1e-12));
}

TEST_CASE("product set classification") {
    auto cfg = small_cfg();
    REQUIRE(*classify_e2(GrowthSpec::power_law(2.0), cfg).value == 1.0);
    REQUIRE(*classify_e2(GrowthSpec::doubly_exp(2.0), cfg).value == Catch::Approx(1.0 / 3));
    auto v = classify_e2(GrowthSpec::exponential(16.0), cfg);
    REQUIRE(v.formula == Verdict::Formula::S0);
    // s_0 exceeds s_B at the same rate
    REQUIRE(*v.value > *classify_e1(GrowthSpec::exponential(16.0), cfg).value);
}

TEST_CASE("single-function difference set classification") {
    auto cfg = small_cfg();
    auto a = classify_f(GrowthSpec::exponential(8.0), cfg);
    REQUIRE(a.formula == Verdict::Formula::S0);
    REQUIRE(*a.value == Catch::Approx(estimate_dim(Potential::s0(8.0), cfg).value).epsilon(1e-12));
    REQUIRE(*classify_f(GrowthSpec::doubly_exp(4.0), cfg).value == Catch::Approx(0.2));
    REQUIRE_THROWS_AS(classify_f(GrowthSpec::power_law(1.0), cfg), UnsupportedError);
}

TEST_CASE("two-rate classification across the main cases") {
    auto cfg = small_cfg();
    // case 1: B2 far above B1^{s0}
    auto c1 = classify_f2(GrowthSpec::exponential(4.0), GrowthSpec::exponential(16.0), cfg);
    REQUIRE(c1.regime == "F2:case1");
    REQUIRE(c1.formula == Verdict::Formula::S0);
    // case 2: sqrt(B1) < B2 < B1^{s0}
    auto c2 = classify_f2(GrowthSpec::exponential(16.0), GrowthSpec::exponential(4.5), cfg);
    REQUIRE(c2.regime == "F2:case2");
    REQUIRE(c2.formula == Verdict::Formula::G);
    REQUIRE(*c2.value == Catch::Approx(estimate_dim(Potential::g(16.0, 4.5), cfg).value).epsilon(1e-12));
    // case 3: B2 below sqrt(B1)
    auto c3 = classify_f2(GrowthSpec::exponential(16.0), GrowthSpec::exponential(3.0), cfg);
    REQUIRE(c3.kind == Verdict::Kind::Empty);
    REQUIRE(c3.regime == "F2:case3");
    REQUIRE_FALSE(c3.certificates.empty());
    // case 4: both infinite rates, b1 < b2
    auto c4 = classify_f2(GrowthSpec::doubly_exp(2.0), GrowthSpec::doubly_exp(3.0), cfg);
    REQUIRE(c4.regime == "F2:case4");
    REQUIRE(*c4.value == Catch::Approx(1.0 / 3));
    // case 5: b1 > b2
    auto c5 = classify_f2(GrowthSpec::doubly_exp(3.0), GrowthSpec::doubly_exp(2.0), cfg);
    REQUIRE(c5.kind == Verdict::Kind::Empty);
    REQUIRE(c5.regime == "F2:case5");
    // mixed: B1 finite, B2 infinite -> case 1 with an interpretation note
    auto m = classify_f2(GrowthSpec::exponential(4.0), GrowthSpec::doubly_exp(2.0), cfg);
    REQUIRE(m.regime == "F2:case1");
    REQUIRE_FALSE(m.certificates.empty());
    // mixed: B1 infinite, B2 finite -> empty
    auto m2 = classify_f2(GrowthSpec::doubly_exp(2.0), GrowthSpec::exponential(4.0), cfg);
    REQUIRE(m2.kind == Verdict::Kind::Empty);
}

TEST_CASE("two-rate boundary fixtures") {
    auto cfg = small_cfg();
    // squared-rate boundary, incompatible constants: empty
    auto e1 = classify_f2(GrowthSpec::exponential(9.0), GrowthSpec::exponential(3.0), cfg);
    REQUIRE(e1.kind == Verdict::Kind::Empty);
    REQUIRE(e1.boundary);
    // squared-rate boundary, feasible window constants: the two-rate value
    auto e2 = classify_f2(GrowthSpec::exponential(9.0, 1.0 / 3.0), GrowthSpec::exponential(3.0, 9.0), cfg);
    REQUIRE(e2.kind == Verdict::Kind::Dimension);
    REQUIRE(e2.boundary);
    REQUIRE(e2.formula == Verdict::Formula::G);
    REQUIRE(*e2.value == Catch::Approx(estimate_dim(Potential::g(9.0, 3.0), cfg).value).epsilon(1e-12));
    // equal doubly-exponential rates: the single-function value
    auto p1 = classify_f2(GrowthSpec::doubly_exp(2.0), GrowthSpec::doubly_exp(2.0), cfg);
    REQUIRE(*p1.value == Catch::Approx(1.0 / 3));
    REQUIRE(p1.boundary);
    // equal rates with an incompatible shift: empty
    auto p2 = classify_f2(GrowthSpec::doubly_exp(2.0, 5.0), GrowthSpec::shifted_doubly_exp(2.0, 1.0, -1), cfg);
    REQUIRE(p2.kind == Verdict::Kind::Empty);
    REQUIRE(p2.boundary);
    // equal rates, smaller Phi2, no certificate either way
    auto u = classify_f2(GrowthSpec::doubly_exp(2.0, 1.3), GrowthSpec::doubly_exp(2.0, 1.0), cfg);
    REQUIRE(u.kind == Verdict::Kind::ZeroOrEmpty);
    REQUIRE(u.boundary);
}

TEST_CASE("limit refusal when Phi2 oscillates") {
    auto cfg = small_cfg();
    auto osc = GrowthSpec::table_oscillating({2.0}, GrowthSpec::exponential(2.0), GrowthSpec::exponential(8.0));
    REQUIRE_THROWS_AS(classify_f2(GrowthSpec::exponential(16.0), osc, cfg), LimitMissingError);
}

TEST_CASE("exponent-level dispatch covers the doubly-infinite case") {
    auto cfg = small_cfg();
    GrowthExponents e1{kInf, kInf, LimitKind::Liminf, true};
    GrowthExponents e2{kInf, kInf, LimitKind::Lim, true};
    // with an emptiness certificate
    auto v = classify_f2_cases(e1, e2, GrowthSpec::doubly_exp(2.0, 5.0),
                               GrowthSpec::shifted_doubly_exp(2.0, 1.0, -1), cfg);
    REQUIRE(v.kind == Verdict::Kind::Empty);
    REQUIRE(v.regime == "F2:case6");
    // without one
    auto w = classify_f2_cases(e1, e2, GrowthSpec::doubly_exp(2.0), GrowthSpec::doubly_exp(3.0), cfg);
    REQUIRE(w.kind == Verdict::Kind::ZeroOrEmpty);
    REQUIRE(w.regime == "F2:case6");
}

TEST_CASE("exponential-rate special case matches the general classifier") {
    auto cfg = small_cfg();
    const double grid_b1[] = {4.0, 16.0};
    const double grid_b2[] = {1.5, 2.5, 4.5, 14.0};
    for (double b1 : grid_b1)
        for (double b2 : grid_b2) {
            auto direct = classify_fbb(b1, b2, cfg);
            auto general = classify_f2(GrowthSpec::exponential(b1), GrowthSpec::exponential(b2), cfg);
            REQUIRE(kind_name(direct.kind) == std::string(kind_name(general.kind)));
            if (direct.value) REQUIRE(*direct.value == Catch::Approx(*general.value).margin(1e-12));
        }
}

TEST_CASE("special-case regime boundaries") {
    auto cfg = small_cfg();
    auto e = classify_fbb(16.0, 3.0, cfg);
    REQUIRE(e.kind == Verdict::Kind::Empty); // 3 < 4 = sqrt(16)
    auto eq = classify_fbb(16.0, 4.0, cfg);  // equality still empty
    REQUIRE(eq.kind == Verdict::Kind::Empty);
    REQUIRE(eq.boundary);

    const double s0 = estimate_dim(Potential::s0(16.0), cfg).value;
    auto onc = classify_fbb(16.0, std::pow(16.0, s0), cfg);
    REQUIRE(onc.kind == Verdict::Kind::Dimension);
    REQUIRE(*onc.value == Catch::Approx(s0).margin(1e-4)); // both branches agree on the curve

    auto hi = classify_fbb(16.0, 15.0, cfg);
    // 15 exceeds 16^{s0}: the squared-exponent region
    REQUIRE(std::pow(16.0, s0) < 15.0);
    REQUIRE(hi.formula == Verdict::Formula::S0);
}

TEST_CASE("window-set dimension is the min of the two roots") {
    auto cfg = small_cfg();
    auto v = dim_ea(2.0, 2.0, cfg);
    const double s = estimate_dim(Potential::sb(2.0), cfg).value;
    const double g = estimate_dim(Potential::g(4.0, 2.0), cfg).value;
    REQUIRE(*v.value == Catch::Approx(std::min(s, g)).epsilon(1e-12));
    REQUIRE(v.formula == Verdict::Formula::MinSG);

    // on the curve A1 = B^{s0}, A1 A2 = B the min lands on the single-rate root
    const double B = 16.0;
    const double s0 = estimate_dim(Potential::s0(B), cfg).value;
    auto w = dim_ea(std::pow(B, s0), std::pow(B, 1.0 - s0), cfg);
    REQUIRE(*w.value == Catch::Approx(s0).margin(1e-4)); // s_{B^{s0}} = s0
    // growing A2 pushes the two-rate branch down to the min
    auto big = dim_ea(2.0, 40.0, cfg);
    const double gg = estimate_dim(Potential::g(80.0, 2.0), cfg).value;
    REQUIRE(*big.value == Catch::Approx(gg).epsilon(1e-12));
    REQUIRE_THROWS_AS(dim_ea(1.2, 0.5, cfg), UnsupportedError);
}

TEST_CASE("closed-form evaluators") {
    REQUIRE(dim_luczak(2.0) == Catch::Approx(1.0 / 3));
    REQUIRE(dim_luczak(4.0) == Catch::Approx(0.2));
    REQUIRE(dim_luczak(1.000001) == Catch::Approx(0.5).margin(1e-6));
    REQUIRE_THROWS_AS(dim_luczak(1.0), std::invalid_argument);

    REQUIRE(dim_flww(GrowthSpec::doubly_exp(1.05)) == Catch::Approx(1.0 / 2.05));
    REQUIRE(dim_flww(GrowthSpec::doubly_exp(2.5)) == Catch::Approx(1.0 / 3.5));
    REQUIRE(dim_flww(GrowthSpec::exponential(3.0)) == Catch::Approx(0.5));
    REQUIRE(dim_flww(GrowthSpec::power_law(2.0)) == Catch::Approx(0.5));
    REQUIRE_THROWS_AS(dim_flww(GrowthSpec::exponential(1.0)), UnsupportedError); // constant sequence
}

TEST_CASE("monotone sandwich: growing Phi2 never shrinks the verdict") {
    auto cfg = small_cfg();
    auto phi1 = GrowthSpec::exponential(16.0);
    double prev = -1.0;
    bool seen_nonempty = false;
    for (double B2 : {3.0, 4.5, 6.0, 9.0, 16.0, 64.0}) {
        auto v = classify_f2(phi1, GrowthSpec::exponential(B2), cfg);
        if (v.kind == Verdict::Kind::Empty) {
            REQUIRE_FALSE(seen_nonempty);
            continue;
        }
        seen_nonempty = true;
        REQUIRE(*v.value >= prev - 1e-12);
        prev = *v.value;
    }
}

TEST_CASE("an emptiness certificate precludes a positive dimension") {
    auto cfg = small_cfg(32);
    std::mt19937_64 rng(41);
    auto u = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    int forced = 0;
    for (int t = 0; t < 60; ++t) {
        GrowthSpec p1, p2;
        if (t % 2 == 0) {
            p1 = GrowthSpec::exponential(u(1.1, 40.0), u(0.2, 5.0));
            p2 = GrowthSpec::exponential(u(1.1, 40.0), u(0.2, 5.0));
        } else {
            p1 = GrowthSpec::doubly_exp(u(1.1, 4.0), u(0.2, 5.0));
            p2 = GrowthSpec::doubly_exp(u(1.1, 4.0), u(0.2, 5.0));
        }
        if (incompatibility_test(p1, p2, cfg.horizon) != Compat::EmptyForced) continue;
        ++forced;
        auto v = classify_f2(p1, p2, cfg);
        REQUIRE(v.kind != Verdict::Kind::Dimension);
    }
    REQUIRE(forced > 0); // the sample must actually exercise the property
}

TEST_CASE("verdict serialization shape") {
    auto cfg = small_cfg();
    auto v = classify_fbb(16.0, 3.0, cfg);
    auto j = verdict_json(v);
    REQUIRE(j["kind"] == "empty");
    REQUIRE(j["boundary"] == false);
    REQUIRE(j["certificates"].is_array());
    REQUIRE(j.contains("solver_error"));

    auto d = verdict_json(classify_fbb(16.0, 12.0, cfg));
    REQUIRE(d["kind"] == "dimension");
    REQUIRE(d["value"].is_number());
    REQUIRE(d["formula"] == "s_0");
}
