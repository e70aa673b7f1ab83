#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "branched/character.hpp"
#include "branched/lift.hpp"

using namespace branched;

TEST_CASE("polynomial lift of the identity path is the canonical character") {
    PolynomialLift lift(named_polynomial_path("identity"));
    Rational s(1, 4), t(7, 8);
    for (int n = 1; n <= 5; ++n)
        for (const Tree& tau : enumerate_trees(n)) {
            Rational want =
                rational_pow(t - s, n) / Rational(tree_factorial(tau));
            CHECK(lift.tree_value(tau, s, t) == want);
        }
}

TEST_CASE("area integral of the parabola path") {
    // <X_{0,1}, [*1]2> = int_0^1 u d(u^2) = 2/3.
    PolynomialLift lift(named_polynomial_path("parabola"));
    CHECK(lift.tree_value(parse_tree("[*1]2"), Rational(0), Rational(1)) ==
          Rational(2, 3));
    // And the mirror integral int_0^1 u^2 du = 1/3.
    CHECK(lift.tree_value(parse_tree("[*2]1"), Rational(0), Rational(1)) ==
          Rational(1, 3));
    // First-degree increments.
    CHECK(lift.tree_value(parse_tree("*1"), Rational(0), Rational(1)) ==
          Rational(1));
    CHECK(lift.tree_value(parse_tree("*2"), Rational(1, 2), Rational(1)) ==
          Rational(3, 4));
}

TEST_CASE("corolla values of the identity path") {
    PolynomialLift lift(named_polynomial_path("identity"));
    for (int n = 1; n <= 6; ++n) {
        std::vector<Tree> leaves(n, single_vertex());
        Tree corolla = join(Forest(leaves));
        CHECK(lift.tree_value(corolla, Rational(0), Rational(1)) ==
              Rational(1, n + 1));
    }
}

TEST_CASE("polynomial lifts satisfy the flow identity exactly") {
    PolynomialLift lift(named_polynomial_path("cubic"));
    Rational s(0), m(1, 3), t(4, 5);
    auto chr = [&](const Rational& a, const Rational& b) {
        return make_character_from_tree_values<Rational>(
            4, 2, [&](const Tree& tau) { return lift.tree_value(tau, a, b); });
    };
    Character<Rational> left = chr(s, m), right = chr(m, t), full = chr(s, t);
    Character<Rational> composed = star(left, right);
    for (int n = 0; n <= 4; ++n)
        for (const Forest& f : enumerate_forests(n, 2))
            CHECK(composed.value(f) == full.value(f));
}

TEST_CASE("polynomial lift rejects labels beyond the dimension") {
    PolynomialLift lift(named_polynomial_path("identity"));
    CHECK_THROWS_AS(lift.tree_value(parse_tree("*2"), Rational(0), Rational(1)),
                    std::invalid_argument);
}

TEST_CASE("young lift of the parabola matches the exact lift") {
    auto comps = named_polynomial_path("parabola");
    PathData data = sample_polynomial(comps, (1 << 10) + 1);
    YoungLift young = lift_young(data, 3, 0, 6, 1e-7);
    CHECK(young.converged);
    PolynomialLift exact(comps);
    for (int n = 1; n <= 3; ++n)
        for (const Tree& tau : enumerate_trees(n, 2)) {
            const auto& vals = young.values.at(tau.key());
            for (std::size_t p = 0; p < young.out_times.size(); ++p) {
                double want = static_cast<double>(to_ld(exact.tree_value(
                    tau, Rational(0),
                    Rational(static_cast<long>(young.out_indices[p]),
                             static_cast<long>(data.samples() - 1)))));
                CHECK(std::fabs(vals[p] - want) < 1e-7);
            }
        }
}

TEST_CASE("young lift refinement deltas decrease") {
    auto comps = named_polynomial_path("cubic");
    PathData data = sample_polynomial(comps, (1 << 10) + 1);
    YoungLift young = lift_young(data, 3, 0, 6, 1e-6);
    REQUIRE(young.level_deltas.size() >= 3);
    std::size_t last = young.level_deltas.size() - 1;
    CHECK(young.level_deltas[last] <= young.level_deltas[0]);
    CHECK(young.achieved_delta <= 1e-6);
}

TEST_CASE("young lift validates its grid arguments") {
    PathData data = sample_polynomial(named_polynomial_path("identity"), 101);
    CHECK_THROWS_AS(lift_young(data, 2, 0, 4, 1e-6), std::invalid_argument);
    PathData ok = sample_polynomial(named_polynomial_path("identity"), 129);
    CHECK_THROWS_AS(lift_young(ok, 2, 3, 4, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(lift_young(ok, 2, 0, 4, 0.0), std::invalid_argument);
    CHECK_NOTHROW(lift_young(ok, 2, 8, 4, 1e-6));
}

TEST_CASE("chen_shift agrees with a re-anchored young lift") {
    auto comps = named_polynomial_path("parabola");
    PathData data = sample_polynomial(comps, (1 << 10) + 1);
    YoungLift from_zero = lift_young(data, 3, 0, 6, 1e-7);
    std::size_t a = 8, b = 24;  // output positions: indices 256 and 768
    auto shifted = chen_shift(from_zero, 3, 2, a, b);
    YoungLift re = lift_young(data, 3, from_zero.out_indices[a], 6, 1e-7);
    for (const auto& [key, vals] : re.values) {
        std::size_t pos = (from_zero.out_indices[b] - re.anchor_index) /
                          (from_zero.out_indices[1] - from_zero.out_indices[0]);
        CHECK(std::fabs(shifted.at(key) - vals[pos]) < 1e-6);
    }
}

TEST_CASE("weierstrass preset is deterministic in the seed") {
    PathData a = weierstrass_preset(0.7, 99, 257, 8, 2);
    PathData b = weierstrass_preset(0.7, 99, 257, 8, 2);
    PathData c = weierstrass_preset(0.7, 100, 257, 8, 2);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.dimension() == 2);
}

TEST_CASE("holder norm estimate of the parabola at exponent one") {
    PathData data = sample_polynomial(named_polynomial_path("parabola"), 4097);
    double est = holder_norm_estimate(data.times, data.values[1], 1.0);
    // sup |t^2 - s^2| / |t - s| = 2 on [0,1]; the grid under-estimates.
    CHECK(est <= 2.0);
    CHECK(est > 2.0 - 1e-3);
}

TEST_CASE("csv path round trip") {
    PathData data = sample_polynomial(named_polynomial_path("parabola"), 65);
    std::string file = "lift_roundtrip_tmp.csv";
    save_path_csv(data, file);
    PathData back = load_path_csv(file);
    REQUIRE(back.dimension() == 2);
    REQUIRE(back.samples() == 65);
    for (std::size_t i = 0; i < back.samples(); ++i) {
        CHECK(back.times[i] == doctest::Approx(data.times[i]).epsilon(1e-12));
        CHECK(back.values[0][i] ==
              doctest::Approx(data.values[0][i]).epsilon(1e-12));
    }
    std::remove(file.c_str());
}

TEST_CASE("csv loader rejects malformed input") {
    auto write = [](const std::string& file, const std::string& text) {
        std::FILE* f = std::fopen(file.c_str(), "w");
        REQUIRE(f);
        std::fputs(text.c_str(), f);
        std::fclose(f);
    };
    std::string file = "lift_badcsv_tmp.csv";
    write(file, "time,x1\n0,0\n1,1\n");
    CHECK_THROWS_AS(load_path_csv(file), std::invalid_argument);
    write(file, "t,x1\n0,0\n0,1\n");
    CHECK_THROWS_AS(load_path_csv(file), std::invalid_argument);
    write(file, "t,x1\n0,abc\n1,1\n");
    CHECK_THROWS_AS(load_path_csv(file), std::invalid_argument);
    write(file, "t,x1\n0,0,5\n1,1\n");
    CHECK_THROWS_AS(load_path_csv(file), std::invalid_argument);
    std::remove(file.c_str());
}
