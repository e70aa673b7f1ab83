#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <string>

#include "branched/hopf.hpp"
#include "branched/trees.hpp"

using namespace branched;

namespace {

std::map<std::pair<std::string, std::string>, BigInt> term_map(const Forest& f) {
    std::map<std::pair<std::string, std::string>, BigInt> m;
    for (const CutTerm& t : coproduct_forest(f))
        m[{t.pruned.key(), t.trunk.key()}] = t.mult;
    return m;
}

Tree corolla(int n) {
    std::vector<Tree> leaves(n, single_vertex());
    return join(Forest(leaves));
}

}  // namespace

TEST_CASE("coproduct of the single vertex") {
    auto m = term_map(Forest(single_vertex()));
    REQUIRE(m.size() == 2);
    CHECK(m.at({"*", "1"}) == 1);
    CHECK(m.at({"1", "*"}) == 1);
}

TEST_CASE("coproduct of the cherry, by hand cut enumeration") {
    auto m = term_map(Forest(parse_tree("[*.*]")));
    REQUIRE(m.size() == 4);
    CHECK(m.at({"[*.*]", "1"}) == 1);
    CHECK(m.at({"*.*", "*"}) == 1);
    CHECK(m.at({"*", "[*]"}) == 2);
    CHECK(m.at({"1", "[*.*]"}) == 1);
}

TEST_CASE("coproduct of the three-vertex ladder") {
    auto m = term_map(Forest(parse_tree("[[*]]")));
    REQUIRE(m.size() == 4);
    CHECK(m.at({"[[*]]", "1"}) == 1);
    CHECK(m.at({"[*]", "*"}) == 1);
    CHECK(m.at({"*", "[*]"}) == 1);
    CHECK(m.at({"1", "[[*]]"}) == 1);
}

TEST_CASE("coproduct of the two-vertex forest") {
    auto m = term_map(parse_forest("*.*"));
    REQUIRE(m.size() == 3);
    CHECK(m.at({"*.*", "1"}) == 1);
    CHECK(m.at({"*", "*"}) == 2);
    CHECK(m.at({"1", "*.*"}) == 1);
}

TEST_CASE("coproduct of the empty forest") {
    auto m = term_map(Forest());
    REQUIRE(m.size() == 1);
    CHECK(m.at({"1", "1"}) == 1);
}

TEST_CASE("coproduct of a labelled cherry keeps labels on both legs") {
    auto m = term_map(Forest(parse_tree("[*1.*2]1")));
    REQUIRE(m.size() == 5);
    CHECK(m.at({"[*1.*2]1", "1"}) == 1);
    CHECK(m.at({"*1.*2", "*1"}) == 1);
    CHECK(m.at({"*1", "[*2]1"}) == 1);
    CHECK(m.at({"*2", "[*1]1"}) == 1);
    CHECK(m.at({"1", "[*1.*2]1"}) == 1);
}

TEST_CASE("every cut term preserves the vertex grading") {
    for (int n = 0; n <= 6; ++n)
        for (const Forest& f : enumerate_forests(n))
            for (const CutTerm& t : coproduct_forest(f)) {
                CHECK(t.pruned.size() + t.trunk.size() == f.size());
                CHECK(t.mult > 0);
            }
}

TEST_CASE("counit laws hold exactly") {
    for (int n = 0; n <= 6; ++n)
        for (const Forest& f : enumerate_forests(n)) {
            int left = 0, right = 0;
            for (const CutTerm& t : coproduct_forest(f)) {
                if (t.pruned.empty()) {
                    ++left;
                    CHECK(t.trunk == f);
                    CHECK(t.mult == 1);
                }
                if (t.trunk.empty()) {
                    ++right;
                    CHECK(t.pruned == f);
                    CHECK(t.mult == 1);
                }
            }
            CHECK(left == 1);
            CHECK(right == 1);
        }
}

TEST_CASE("coassociativity on all unlabelled forests up to six vertices") {
    for (int n = 0; n <= 6; ++n)
        for (const Forest& f : enumerate_forests(n))
            CHECK(double_coproduct_left(f) == double_coproduct_right(f));
}

TEST_CASE("coassociativity on labelled forests up to four vertices") {
    for (int n = 0; n <= 4; ++n)
        for (const Forest& f : enumerate_forests(n, 2))
            CHECK(double_coproduct_left(f) == double_coproduct_right(f));
}

TEST_CASE("coproduct is multiplicative on products of forests") {
    for (int a = 1; a <= 3; ++a)
        for (const Forest& f : enumerate_forests(a))
            for (int b = 1; b <= 3; ++b)
                for (const Forest& g : enumerate_forests(b)) {
                    std::map<std::pair<std::string, std::string>, BigInt> prod;
                    for (const CutTerm& x : coproduct_forest(f))
                        for (const CutTerm& y : coproduct_forest(g))
                            prod[{x.pruned.concat(y.pruned).key(),
                                  x.trunk.concat(y.trunk).key()}] +=
                                x.mult * y.mult;
                    CHECK(prod == term_map(f.concat(g)));
                }
}

TEST_CASE("trunk test agrees with membership in the cut sum") {
    for (int a = 1; a <= 5; ++a)
        for (const Tree& sigma : enumerate_trees(a))
            for (int b = 1; b <= 5; ++b)
                for (const Tree& tau : enumerate_trees(b)) {
                    bool in_cuts = false;
                    for (const CutTerm& t : coproduct_tree(tau))
                        if (t.trunk == Forest(sigma)) in_cuts = true;
                    CHECK(is_trunk(sigma, tau) == in_cuts);
                }
}

TEST_CASE("cut sum over corolla trunks gives binomial weights") {
    // tau_n = [*^n]; pruning l leaves leaves tau_{n-l}, with multiplicity
    // binomial(n, l) and pruned factorial 1.
    Rational beta(7, 3);
    for (int n = 1; n <= 6; ++n) {
        for (int l = 0; l <= n; ++l) {
            // l == n prunes all leaves and leaves the bare root.
            Forest trunk(corolla(n - l));
            Rational got = cut_sum_over_trunk_rational(corolla(n), trunk, beta);
            Rational want = Rational(binomial_big(n, l)) * rational_pow(beta, -l);
            CHECK(got == want);
        }
        // Formal term: trunk 1, pruned tau_n.
        Rational formal =
            cut_sum_over_trunk_rational(corolla(n), Forest(), beta);
        CHECK(formal == rational_pow(beta, -1) /
                            Rational(tree_factorial(corolla(n))));
    }
}

TEST_CASE("cut sum for the ladder over the single-vertex trunk") {
    Tree l3 = parse_tree("[[*]]");
    Rational got = cut_sum_over_trunk_rational(l3, Forest(single_vertex()));
    CHECK(got == Rational(1, 2));
    LogVal lg = cut_sum_over_trunk_log(l3, Forest(single_vertex()), 0.5L,
                                       std::log(2.0L));
    // beta = 2, gamma = 1/2: 2^(-1) / sqrt(2).
    CHECK(std::fabs(std::exp(lg.lg) - 0.5L / std::sqrt(2.0L)) < 1e-15L);
}

TEST_CASE("log cut sum matches the rational cut sum at gamma 1") {
    Rational beta(3, 2);
    long double log_beta = std::log(1.5L);
    for (int n = 2; n <= 5; ++n)
        for (const Tree& tau : enumerate_trees(n))
            for (const Forest& trunk : proper_tree_trunks(tau, true)) {
                Rational exact = cut_sum_over_trunk_rational(tau, trunk, beta);
                LogVal lg = cut_sum_over_trunk_log(tau, trunk, 1.0L, log_beta);
                REQUIRE(!lg.zero);
                CHECK(std::fabs(std::exp(lg.lg) - to_ld(exact)) <=
                      1e-15L * to_ld(exact));
            }
}

TEST_CASE("tree binomial identity on small trees") {
    Tree cherry = parse_tree("[*.*]");
    CHECK(tree_binomial(cherry, 1) == Rational(3));
    CHECK(tree_binomial(cherry, 0) == Rational(1));
    CHECK(tree_binomial(cherry, 3) == Rational(1));
    for (int n = 1; n <= 6; ++n)
        for (const Tree& tau : enumerate_trees(n))
            for (int l = 0; l <= n; ++l)
                CHECK(tree_binomial(tau, l) == Rational(binomial_big(n, l)));
}

TEST_CASE("permutation classes for the cherry over the one-leaf corolla") {
    Tree tau = parse_tree("[*.*]");
    Tree sigma = parse_tree("[*]");
    auto pc = permutation_classes(tau, sigma);
    CHECK(pc.p_sigma == 2);
    CHECK(pc.p_prime == 2);
    CHECK(pc.k_min == 1);
}

TEST_CASE("permutation classes reject arity overflow") {
    CHECK_THROWS_AS(permutation_classes(parse_tree("[*]"), parse_tree("[*.*]")),
                    std::invalid_argument);
}

TEST_CASE("arrangement counts match the multinomial formula") {
    for (int b = 2; b <= 6; ++b)
        for (const Tree& tau : enumerate_trees(b))
            for (const Forest& trunk : proper_tree_trunks(tau, false)) {
                const Tree& sigma = trunk.trees()[0];
                if (sigma.children().size() > tau.children().size()) continue;
                auto pc = permutation_classes(tau, sigma);
                // multinomial: n! / prod over distinct slot values.
                std::map<std::string, int> mult;
                for (const Tree& c : sigma.children()) ++mult[c.key()];
                int n = static_cast<int>(tau.children().size());
                int pad = n - static_cast<int>(sigma.children().size());
                if (pad > 0) mult["1"] += pad;
                BigInt denom(1);
                for (auto& [k, c] : mult) denom *= factorial_big(c);
                CHECK(pc.p_sigma == factorial_big(n) / denom);
                CHECK(pc.p_prime >= 1);
                CHECK(pc.p_prime <= pc.p_sigma);
            }
}

TEST_CASE("counting estimate: at least one child strictly shrinks") {
    // For sigma a proper tree trunk of tau with compatible arity, the minimal
    // number of strictly shrinking slots is >= 1 and the arrangement count is
    // bounded by exp(|sigma|^2 k).
    for (int b = 2; b <= 6; ++b)
        for (const Tree& tau : enumerate_trees(b))
            for (const Forest& trunk : proper_tree_trunks(tau, false)) {
                const Tree& sigma = trunk.trees()[0];
                if (sigma.children().size() > tau.children().size()) continue;
                auto pc = permutation_classes(tau, sigma);
                REQUIRE(pc.p_prime >= 1);
                REQUIRE(pc.k_min >= 1);
                int m_empty = static_cast<int>(tau.children().size()) -
                              static_cast<int>(sigma.children().size());
                CHECK(m_empty <= pc.k_min);
                long double lhs = to_ld(pc.p_prime);
                long double bound =
                    std::exp(static_cast<long double>(sigma.size()) *
                             sigma.size() * pc.k_min);
                CHECK(lhs <= bound);
            }
}
