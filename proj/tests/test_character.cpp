#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "branched/character.hpp"

using namespace branched;

TEST_CASE("the counit is the unit of convolution") {
    Character<Rational> eps(4);
    Character<Rational> X = random_rational_character(4, 0, 11);
    for (int n = 0; n <= 4; ++n)
        for (const Forest& f : enumerate_forests(n)) {
            CHECK(star_value(eps, X, f) == X.value(f));
            CHECK(star_value(X, eps, f) == X.value(f));
        }
}

TEST_CASE("convolution is associative") {
    Character<Rational> X = random_rational_character(5, 0, 1);
    Character<Rational> Y = random_rational_character(5, 0, 2);
    Character<Rational> Z = random_rational_character(5, 0, 3);
    Character<Rational> left = star(star(X, Y), Z);
    Character<Rational> right = star(X, star(Y, Z));
    for (int n = 0; n <= 5; ++n)
        for (const Forest& f : enumerate_forests(n))
            CHECK(left.value(f) == right.value(f));
}

TEST_CASE("characters are closed under convolution") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Character<Rational> X = random_rational_character(5, 0, 100 + seed);
        Character<Rational> Y = random_rational_character(5, 0, 200 + seed);
        CHECK(!is_character(X));
        CHECK(!is_character(Y));
        CHECK(!is_character(star(X, Y)));
    }
}

TEST_CASE("graded star pieces sum to the full star") {
    Character<Rational> X = random_rational_character(5, 0, 42);
    Character<Rational> Y = random_rational_character(5, 0, 43);
    for (int n = 1; n <= 5; ++n)
        for (const Forest& f : enumerate_forests(n)) {
            Rational total(0);
            for (int k = 0; k <= f.size(); ++k)
                total += graded_star_value(X, f.size() - k, Y, k, f);
            CHECK(total == star_value(X, Y, f));
        }
}

TEST_CASE("graded star vanishes off its degree") {
    Character<Rational> X = random_rational_character(4, 0, 7);
    Character<Rational> Y = random_rational_character(4, 0, 8);
    Forest f = parse_forest("[*].*");
    CHECK(graded_star_value(X, 1, Y, 1, f) == Rational(0));
    CHECK(graded_star_value(X, 3, Y, 1, f) == Rational(0));
}

TEST_CASE("canonical monotone lift satisfies the two-parameter flow identity") {
    Rational s(1, 3), t(3, 4);
    Character<Rational> first = identity_character(5, Rational(0), s);
    Character<Rational> second = identity_character(5, s, t);
    Character<Rational> full = identity_character(5, Rational(0), t);
    Character<Rational> composed = star(first, second);
    for (int n = 0; n <= 5; ++n)
        for (const Forest& f : enumerate_forests(n))
            CHECK(composed.value(f) == full.value(f));
}

TEST_CASE("is_character flags the first defective forest") {
    Character<Rational> X(3);
    X.set(Forest(single_vertex()), Rational(1));
    X.set(parse_forest("*.*"), Rational(5));
    auto bad = is_character(X);
    REQUIRE(bad.has_value());
    CHECK(bad->key() == "*.*");
}

TEST_CASE("multiplicatively completed characters pass is_character") {
    Character<Rational> X = random_rational_character(6, 0, 77);
    CHECK(!is_character(X).has_value());
    Character<double> Xd = make_character_from_tree_values<double>(
        4, 2, [](const Tree& t) { return 1.0 / (1.0 + t.size()); });
    CHECK(!is_character(Xd, 1e-12L).has_value());
}

TEST_CASE("degree reads past the truncation fail hard") {
    Character<Rational> X(2);
    Forest big = parse_forest("*.*.*");
    CHECK_THROWS_AS(X.value(big), std::domain_error);
    CHECK_THROWS_AS(X.set(big, Rational(1)), std::domain_error);
    Character<Rational> Y(5);
    CHECK_THROWS_AS(star_value(X, Y, big), std::domain_error);
}

TEST_CASE("the empty forest is pinned to one") {
    Character<Rational> X(3);
    CHECK(X.value(Forest()) == Rational(1));
    CHECK_THROWS_AS(X.set(Forest(), Rational(2)), std::invalid_argument);
}

TEST_CASE("weighted norms of the canonical lift on the unit interval") {
    Character<Rational> X = identity_character(4, Rational(0), Rational(1));
    long double log_beta = std::log(5.0L);
    // Degree 1: value 1, single tree, norm beta.
    LogVal n1 = tree_norm_log(X, 1, 1.0L, log_beta);
    CHECK(std::fabs(n1.lg - log_beta) < 1e-15L);
    // Degree 3 at gamma = 1: value tau!^{ -1} times beta tau!/3! = beta/6 for
    // every tree.
    LogVal n3 = tree_norm_log(X, 3, 1.0L, log_beta);
    CHECK(std::fabs(n3.lg - (log_beta - std::log(6.0L))) < 1e-14L);
    // Degree 0 convention.
    CHECK(tree_norm_log(X, 0, 0.5L, log_beta).lg == 0.0L);
    CHECK(forest_norm_log(X, 0, 0.5L, log_beta).lg == 0.0L);
    // Forest norm at degree 2: [*] contributes (1/2) beta, the two-leaf
    // forest contributes beta^2 / 2, which wins for beta > 1.
    LogVal f2 = forest_norm_log(X, 2, 1.0L, log_beta);
    CHECK(std::fabs(f2.lg - (2 * log_beta - std::log(2.0L))) < 1e-14L);
}

TEST_CASE("norms scale linearly in the character") {
    Character<Rational> X = random_rational_character(4, 0, 5);
    Character<Rational> X3 = make_character_from_tree_values<Rational>(
        4, 0, [&](const Tree& t) { return Rational(3) * X.value(t); });
    for (int k = 1; k <= 4; ++k) {
        LogVal a = tree_norm_log(X, k, 0.7L, 1.0L);
        LogVal b = tree_norm_log(X3, k, 0.7L, 1.0L);
        if (a.zero) {
            CHECK(b.zero);
            continue;
        }
        CHECK(std::fabs(b.lg - a.lg - std::log(3.0L)) < 1e-14L);
    }
}

TEST_CASE("forest factorisation of the graded star on split forests") {
    Character<Rational> X = random_rational_character(6, 0, 301);
    Character<Rational> Y = random_rational_character(6, 0, 302);
    for (int a = 1; a <= 3; ++a)
        for (const Forest& f : enumerate_forests(a))
            for (int b = 1; b <= 3; ++b)
                for (const Forest& g : enumerate_forests(b)) {
                    Forest fg = f.concat(g);
                    for (int k = 0; k <= fg.size(); ++k) {
                        Rational lhs =
                            graded_star_value(X, fg.size() - k, Y, k, fg);
                        Rational rhs(0);
                        for (int k1 = 0; k1 <= k; ++k1) {
                            int k2 = k - k1;
                            if (k1 > f.size() || k2 > g.size()) continue;
                            rhs += graded_star_value(X, f.size() - k1, Y, k1, f) *
                                   graded_star_value(X, g.size() - k2, Y, k2, g);
                        }
                        CHECK(lhs == rhs);
                    }
                }
}
