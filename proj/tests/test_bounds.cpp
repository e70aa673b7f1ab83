#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "branched/bounds.hpp"
#include "branched/report.hpp"

using namespace branched;

namespace {
const long double pi = 3.14159265358979323846L;
}

TEST_CASE("euler-maclaurin zeta matches closed forms") {
    CHECK(std::fabs(zeta_em(2.0L) - pi * pi / 6) < 1e-12L);
    CHECK(std::fabs(zeta_em(4.0L) - pi * pi * pi * pi / 90) < 1e-12L);
    CHECK(std::fabs(zeta_em(3.0L) - 1.2020569031595942854L) < 1e-12L);
    CHECK(std::fabs(zeta_em(1.5L) - 2.6123753486854883L) < 1e-9L);
    CHECK(std::fabs(zeta_em(1.2L) - 5.59158L) < 1e-4L);
    CHECK_THROWS_AS(zeta_em(1.0L), std::invalid_argument);
}

TEST_CASE("simplex kernel closed form") {
    // q = 2, b = 2, u = 0, s = 1/2, t = 1: inc = (1 - 1/4)/2 = 3/8,
    // value = (3/8)^2/2 = 9/128.
    CHECK(std::fabs(kernel_value(4, 2, 0.0L, 0.5L, 1.0L) - 9.0L / 128) <
          1e-18L);
    CHECK(kernel_value(17, 0, 0.0L, 0.3L, 0.9L) == 1.0L);
    CHECK(simplex_kernel(0, -5.0L, 0.0L, 0.0L, 0.0L) == 1.0L);
    CHECK(std::fabs(std::exp(log_simplex_kernel(3, 1.5L, 0.1L, 0.2L, 0.8L)) -
                    simplex_kernel(3, 1.5L, 0.1L, 0.2L, 0.8L)) < 1e-18L);
    CHECK(log_simplex_kernel(2, 1.0L, 0.0L, 0.5L, 0.5L) ==
          -std::numeric_limits<long double>::infinity());
    CHECK_THROWS_AS(simplex_kernel(2, 1.0L, 0.5L, 0.4L, 0.6L),
                    std::invalid_argument);
}

TEST_CASE("kernel quadrature agrees with the closed form") {
    CheckReport r = check_kernel_quadrature_agreement(1e-6L);
    CHECK(r.pass());
    // (m,n) pairs: 8 + 7 + 6, each over 10 ordered (u,s,t) triples
    CHECK(r.checked == 210);
    CHECK(std::fabs(kernel_quadrature(4, 2, 0.0L, 0.5L, 1.0L) - 9.0L / 128) <
          1e-6L);
}

TEST_CASE("taylor tail sum equals its integral form") {
    CheckReport r = check_taylor_identity(8, 2, 1e-9L);
    CHECK(r.pass());
    CHECK(r.checked == 3 * (8 + 7 + 6));
    // independent spot check
    long double a = taylor_tail_sum(6, 1, 0.0L, 0.25L, 0.75L);
    long double b = taylor_tail_quadrature(6, 1, 0.0L, 0.25L, 0.75L);
    CHECK(std::fabs(a - b) < 1e-12L * std::max(a, 1e-30L));
}

TEST_CASE("taylor tail is bounded by the simplex kernel") {
    CheckReport r = check_taylor_binomial(8, 2, 4, 1e-12L);
    CHECK(r.pass());
    CHECK(r.checked > 0);
}

TEST_CASE("overlapping-interval kernel bound holds on a small grid") {
    CheckReport r = check_overlapping(8, 2, 2, 4, 1e-12L);
    CHECK(r.pass());
    // m = 0 is an equality, so the worst slack over the grid sits at 0.
    CHECK(r.worst_slack >= -1e-15);
}

TEST_CASE("decreasing kernel estimate holds on a small grid") {
    CheckReport r = check_decreasing(8, 2, 4, 1e-12L);
    CHECK(r.pass());
}

TEST_CASE("adjacent-interval kernel bound holds on a small grid") {
    CheckReport r = check_adjacent(8, 2, 4, 1e-12L);
    CHECK(r.pass());
}

TEST_CASE("constant ladder") {
    CHECK(log_c_const(0, 0.5L) == 0.0L);
    CHECK(log_c_const(3, 1.0L) == 0.0L);
    // c_k = exp(sum_{i=1}^k k^i (1-gamma)); k = 2, gamma = 1/2 gives e^3.
    CHECK(std::fabs(log_c_const(2, 0.5L) - 3.0L) < 1e-15L);
    CHECK(log_c_const(3, 0.5L) > log_c_const(2, 0.5L));
    // c~_2 = c_2 (3 |T^2|)^(1/2) with |T^2| = 1.
    CHECK(std::fabs(log_c_tilde(2, 0.5L) - (3.0L + 0.5L * std::log(3.0L))) <
          1e-15L);
}

TEST_CASE("named constants at gamma = 1, N = 1") {
    Constants c = make_constants(1.0L, 1);
    CHECK(c.trees_exactly_N == 1);
    CHECK(c.trees_upto_N == 1);
    CHECK(c.p == 2.0L);
    CHECK(std::fabs(c.zeta_p - pi * pi / 6) < 1e-10L);
    // 6 e^42 (1 + 4 (zeta(2) - 1)).
    long double expect_thresh =
        std::log(6.0L) + 42.0L + std::log(1 + 4 * (pi * pi / 6 - 1));
    CHECK(std::fabs(c.log_beta_threshold - expect_thresh) < 1e-10L);
    // 6 e^98 2^2 zeta(2).
    long double expect_decay = std::log(6.0L) + 98.0L + 2 * std::log(2.0L) +
                               std::log(pi * pi / 6);
    CHECK(std::fabs(c.log_decay_base - expect_decay) < 1e-10L);
    CHECK(c.log_C_N == 2.0L);
    CHECK(std::fabs(c.log_c5 - (std::log(2.0L) + 2)) < 1e-15L);
    // at gamma = 1 every (1-gamma) factor drops out
    CHECK(c.log_c_N == 0.0L);
    CHECK(std::fabs(c.log_c1 - 4.0L) < 1e-15L);
    CHECK(std::fabs(c.log_c2 - 4.0L) < 1e-15L);
    CHECK(std::fabs(c.log_c_hat - (std::log(3.0L) + 4)) < 1e-15L);
}

TEST_CASE("constants degrade to infinity when the zeta exponent is <= 1") {
    Constants c = make_constants(0.4L, 1);  // p = 0.8
    CHECK(std::isinf(static_cast<double>(c.zeta_p)));
    CHECK(std::isinf(static_cast<double>(c.log_beta_threshold)));
    CHECK(std::isinf(static_cast<double>(c.log_decay_base)));
    CHECK_THROWS_AS(make_constants(0.0L, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_constants(0.5L, 0), std::invalid_argument);
}

TEST_CASE("tree binomial identity") {
    CheckReport r = check_tree_binomial(7);
    CHECK(r.pass());
    CHECK(r.checked > 0);
}

TEST_CASE("cut-sum concavity holds with beta at the constant") {
    for (long double g : {0.3L, 0.5L, 0.9L}) {
        CheckReport r = check_concavity(g, 6, 1e-12L);
        CAPTURE(static_cast<double>(g));
        CHECK(r.pass());
    }
    // gamma = 1 turns every instance into an equality
    CheckReport eq = check_concavity(1.0L, 5, 1e-12L);
    CHECK(eq.pass());
    CHECK(std::fabs(eq.worst_slack) < 1e-13);
}

TEST_CASE("arrangement counting bound") {
    CheckReport r = check_counting(6);
    CHECK(r.pass());
}

TEST_CASE("cut sums factor over child arrangements") {
    CheckReport r1 = check_induction_identity(5, Rational(1));
    CHECK(r1.pass());
    CheckReport r2 = check_induction_identity(5, Rational(7) / 3);
    CHECK(r2.pass());
}

TEST_CASE("graded star products factor over split forests") {
    CheckReport r = check_forest_factorisation(5, 2, 31);
    CHECK(r.pass());
    CHECK(r.checked > 0);
}

TEST_CASE("multiplication bound in tree norm") {
    for (long double g : {0.5L, 1.0L}) {
        CheckReport r = check_star_norm_bound(g, 5, 2, 21, 1e-12L);
        CAPTURE(static_cast<double>(g));
        CHECK(r.pass());
    }
}

TEST_CASE("factorial decay transfers from trees to forests") {
    for (long double g : {0.5L, 1.0L}) {
        CheckReport r = check_factorial_decay_forest(g, 5, 3, 11, 1e-12L);
        CAPTURE(static_cast<double>(g));
        CHECK(r.pass());
    }
}

TEST_CASE("multiplication bound in forest norm") {
    for (long double g : {0.5L, 1.0L}) {
        CheckReport r = check_computation_lemma(g, 5, 2, 13, 1e-12L);
        CAPTURE(static_cast<double>(g));
        CHECK(r.pass());
    }
}

TEST_CASE("remainder bound on the normalized identity path") {
    CheckReport r = check_main_lemma_identity(1, {2, 3}, 2, 1e-10L);
    CHECK(r.pass());
    CHECK(r.checked > 0);
    CHECK_THROWS_AS(check_main_lemma_identity(1, {1}, 2, 1e-10L),
                    std::invalid_argument);
}

TEST_CASE("factorial decay verdict on the identity path") {
    std::vector<std::pair<long double, long double>> pairs = {
        {0.0L, 1.0L}, {0.0L, 0.5L}, {0.25L, 0.75L}, {0.5L, 1.0L},
        {0.0L, 0.25L}};
    auto value_log = [&](const Tree& tau, std::size_t i) {
        auto [s, t] = pairs[i];
        long double lg = tau.size() * std::log(t - s) -
                         static_cast<long double>(
                             log_abs(Rational(tree_factorial(tau))).lg);
        return LogVal::from_log(lg);
    };
    DecayCheckResult res =
        verify_decay(1.0L, 1, 5, 0, pairs, value_log, 1e-12L);
    CHECK(res.strict.pass());
    CHECK(res.inflated.pass());
    // the degree-1 Hoelder norm of the identity path is exactly 1
    CHECK(std::fabs(res.log_norm_factor) < 1e-12L);
    CHECK(res.log_cbar_inflated > res.log_cbar_strict);
    CHECK_THROWS_AS(verify_decay(0.4L, 1, 3, 0, pairs, value_log, 1e-12L),
                    std::invalid_argument);
}

TEST_CASE("crossover of the branched and geometric bounds") {
    CrossoverResult res = branched_geometric_crossover(0.75L);
    CHECK(res.exists);
    CHECK(res.dominant_after);
    // the crossover index is astronomically large but pinned down well
    CHECK(res.log10_n0 > 168.0L);
    CHECK(res.log10_n0 < 182.0L);
    CHECK(std::fabs(res.log_cbar1 - 101.7918L) < 1e-3L);
    CHECK_THROWS_AS(branched_geometric_crossover(0.4L),
                    std::invalid_argument);
}

TEST_CASE("divergent cut sum has a closed form at gamma = 0") {
    // at gamma = 0 the exact sum is ((1 + 1/beta)^n + 1)/beta
    for (int n : {0, 1, 5, 9}) {
        CounterexamplePoint p =
            counterexample_point(n, 0.0L, 2.0L, 0.5L, 1.0L);
        long double expect = (std::pow(1.5L, n) + 1) / 2;
        CHECK(std::fabs(p.exact_sum - expect) < 1e-15L * expect);
        CHECK(p.exact_sum >= p.lower_bound);
    }
}

TEST_CASE("closed-form divergent sum matches the brute-force cut sum") {
    // the corolla-with-stem family: n leaves on one root
    const long double gamma = 0.5L, beta = 2.0L, a = 0.5L, b = 1.0L;
    for (int n = 1; n <= 10; ++n) {
        Tree corolla(0, std::vector<Tree>(n, Tree(0)));
        const long double tau_fact = to_ld(tree_factorial(corolla));
        long double brute = 0;
        for (const CutTerm& term : coproduct_tree(corolla)) {
            long double p_fact = to_ld(forest_factorial(term.pruned));
            long double t_fact = to_ld(forest_factorial(term.trunk));
            brute += to_ld(term.mult) *
                     std::pow(tau_fact / (p_fact * t_fact), gamma) *
                     std::pow(beta, -(term.pruned.count() +
                                      term.trunk.count())) *
                     std::pow(a, gamma * term.pruned.size()) *
                     std::pow(b, gamma * term.trunk.size());
        }
        brute *= std::pow(a + b, -gamma * (n + 1));
        CounterexamplePoint p = counterexample_point(n, gamma, beta, a, b);
        CHECK(std::fabs(brute - p.exact_sum) < 1e-14L * brute);
    }
}

TEST_CASE("exact sum dominates the lower bound on random draws") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int draw = 0; draw < 100; ++draw) {
        long double gamma = 0.95L * unif(rng);
        long double beta = 0.2L + 3 * unif(rng);
        long double a = 0.1L + 2 * unif(rng);
        long double b = 0.1L + 2 * unif(rng);
        int n = 1 + static_cast<int>(30 * unif(rng));
        CounterexamplePoint p = counterexample_point(n, gamma, beta, a, b);
        CAPTURE(static_cast<double>(gamma));
        CAPTURE(static_cast<double>(beta));
        CAPTURE(n);
        CHECK(p.exact_sum >= p.lower_bound * (1 - 1e-15L));
    }
}

TEST_CASE("divergent cut sum at the pinned parameters") {
    const long double limit =
        counterexample_ratio_limit(0.5L, 2.0L, 0.5L, 1.0L);
    // (1 + 2^(-3/2)) / sqrt(3/2)
    CHECK(std::fabs(limit -
                    (1 + std::pow(2.0L, -1.5L)) / std::sqrt(1.5L)) <
          1e-18L);
    CHECK(std::fabs(limit - 1.1051712L) < 1e-6L);

    CounterexampleResult res =
        run_counterexample(0.5L, 2.0L, 0.5L, 1.0L, 120, 1000.0L, 1e-6L);
    CHECK(res.report.pass());
    CHECK(res.n_cross > 50);
    CHECK(res.n_cross < 100);
    CHECK(static_cast<int>(res.points.size()) == 121);
    for (std::size_t i = 0; i + 1 < res.points.size(); ++i)
        CHECK(res.points[i + 1].lower_bound > res.points[i].lower_bound);
}

TEST_CASE("divergence fails when the geometric ratio dips below one") {
    // a above the critical value (beta gamma)^(1/(gamma-1)) = 1 keeps the
    // ratio below 1, so the sum stays bounded and never crosses a big bar
    CHECK(counterexample_ratio_limit(0.5L, 2.0L, 2.0L, 1.0L) < 1.0L);
    CounterexampleResult res =
        run_counterexample(0.5L, 2.0L, 2.0L, 1.0L, 60, 1000.0L, 1e-6L);
    CHECK(res.n_cross == -1);
    CHECK_FALSE(res.report.pass());
}

TEST_CASE("check report records in log scale") {
    CheckReport r;
    r.suite = "demo";
    const long double ninf = -std::numeric_limits<long double>::infinity();
    r.record("zero lhs", ninf, ninf, 1e-12L);
    CHECK(r.violations == 0);
    r.record("ok", 0.0L, 1.0L, 1e-12L);
    CHECK(r.violations == 0);
    r.record("bad", 1.0L, 0.0L, 1e-12L);
    CHECK(r.violations == 1);
    r.record("zero rhs", 0.0L, ninf, 1e-12L);
    CHECK(r.violations == 2);
    CHECK(r.checked == 4);
    CHECK_FALSE(r.pass());
    CHECK(r.worst_point == "zero rhs");
    CHECK(r.witnesses.size() == 2);
}

TEST_CASE("reports serialize to json") {
    CheckReport r;
    r.suite = "demo";
    r.params = {{"gamma", "0.5"}};
    r.record("p", 0.0L, 1.0L, 1e-12L);
    nlohmann::json cfg = {{"command", "test"}};
    std::string path = "report_roundtrip_test.json";
    save_reports_json({r}, path, cfg, false);
    std::ifstream in(path);
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("schema").get<int>() == 1);
    CHECK(j.at("all_pass").get<bool>());
    CHECK(j.at("reports").size() == 1);
    CHECK(j.at("reports")[0].at("suite").get<std::string>() == "demo");
    CHECK(j.at("reports")[0].at("checked").get<long long>() == 1);
    CHECK_FALSE(j.contains("timestamp"));
}

TEST_CASE("characters round-trip through json") {
    Character<Rational> X = random_rational_character(4, 2, 77);
    nlohmann::json j = character_to_json(X);
    Character<Rational> Y = character_from_json(j);
    CHECK(X.max_degree() == Y.max_degree());
    CHECK(X.alphabet() == Y.alphabet());
    for (int n = 1; n <= 4; ++n)
        for (const Forest& f : enumerate_forests(n, 2))
            CHECK(X.value(f) == Y.value(f));
}
