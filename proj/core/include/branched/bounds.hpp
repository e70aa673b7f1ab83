#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "branched/character.hpp"
#include "branched/hopf.hpp"
#include "branched/rational.hpp"
#include "branched/report.hpp"
#include "branched/trees.hpp"

namespace branched {

// Riemann zeta for p > 1 via Euler-Maclaurin with K = 1000 terms.
long double zeta_em(long double p);

// Simplex kernel built from the reference path rho_u^b(v) = (1/b)(v - u)^b:
//   S^(q)(rho_u^b)_{s,t} = [(1/b)((t-u)^b - (s-u)^b)]^q / q!,
// with S^(0) = 1.  Requires u <= s <= t and b > 0 when q > 0.
long double simplex_kernel(int q, long double b, long double u, long double s,
                           long double t);
long double log_simplex_kernel(int q, long double b, long double u,
                               long double s, long double t);

// Convenience form S^(m)(rho_u^{n/m})_{s,t} used throughout the estimates.
long double kernel_value(int n, int m, long double u, long double s,
                         long double t);

// Independent oracle for kernel_value: the iterated integral
//   int_{s < v_1 < ... < v_m < t} prod_i (v_i - u)^{n/m - 1} dv_i
// evaluated by nested cumulative trapezoid sums.  Only sensible for m <= 3.
long double kernel_quadrature(int n, int m, long double u, long double s,
                              long double t, std::size_t grid = 1u << 16);

// Tail of the two-point Taylor expansion,
//   sum_{j=N+1}^{n} (s-u)^(n-j) (t-s)^j / ((n-j)! j!),
// together with its integral form
//   (1/(n-N-1)!) int_s^t (w-u)^(n-N-1) (t-w)^N / N! dw
// evaluated by Simpson quadrature.  The two agree exactly; the sum is also
// bounded by kernel_value(n, N+1, u, s, t) / (n-N-1)!.
long double taylor_tail_sum(int n, int N, long double u, long double s,
                            long double t);
long double taylor_tail_quadrature(int n, int N, long double u, long double s,
                                   long double t,
                                   std::size_t grid = 1u << 16);

// log of c_k = exp[sum_{i=1}^{k} k^i (1-gamma)]; c_0 = 1.
long double log_c_const(int k, long double gamma);
// log of c~_k = c_k ((k+1) |T^k|)^(1-gamma), with |T^k| the number of
// unlabelled rooted trees with exactly k vertices.
long double log_c_tilde(int k, long double gamma);

// The named constants of the factorial-decay machinery at level N.  All are
// stored as natural logs; several are astronomically large.  Two tree-count
// conventions coexist in the source formulas: the multiplication bound uses
// trees with exactly k vertices, while the decay constant and the remainder
// threshold use trees with at most N vertices.  Both counts are kept here.
struct Constants {
    long double gamma = 0;
    int N = 0;
    long long trees_exactly_N = 0;
    long long trees_upto_N = 0;

    long double log_c_N = 0;        // c_N
    long double log_c_tilde_N = 0;  // c~_N
    long double log_C_N = 0;        // C_N = exp(N+1)
    long double log_c_hat = 0;      // 3 |T^{<=N}|^(1-g) (N+1)^(3(1-g)) e^(2(N+1))
    long double log_c1 = 0;         // c~_N C_N^2
    long double log_c2 = 0;         // (N+1)^(2(1-g)) c~_N C_N^2
    long double log_c5 = 0;         // 2 exp(N+1)
    long double log_c6 = 0;         // c5 (N+1)^(1-g)

    long double p = 0;              // (N+1) gamma, the zeta exponent
    long double zeta_p = 0;         // zeta(p), infinite when p <= 1
    long double sigma_r = 0;        // 1 + 2^p (zeta(p) - 1)

    // Remainder-lemma threshold: 6 exp(7 sum_{i=1}^{N+1} (N+1)^i) sigma_r
    // |T^{<=N}|^(1-gamma).
    long double log_beta_threshold = 0;

    // Decay constant without the path-norm factor:
    // 6 exp(7 sum_{i=0}^{N+1} (N+1)^(i+1)) |T^{<=N}|^(2-2g) 2^p zeta(p) N!^g.
    long double log_decay_base = 0;

    // Full decay constant once the path norms are known;  log_norm_factor is
    // max over trees sigma with 1 <= |sigma| <= N of (1/|sigma|) log of the
    // gamma-Hoelder norm at sigma.
    long double decay_constant_log(long double log_norm_factor) const {
        return log_decay_base + log_norm_factor;
    }
};

Constants make_constants(long double gamma, int N);

// --- verification suites -------------------------------------------------
//
// Each returns a CheckReport whose `checked` counts grid points and whose
// `violations` counts failures of the asserted inequality or identity.

// Multiplication bound in tree norm over seeded random rational characters:
// for n, k >= 1 with n + k <= max_total and beta = c_k,
//   |X^n * Y^k|_{T} <= c_k |T^k|^(1-gamma) beta^{-1} |X^n|_{F} |Y^k|_{T}.
CheckReport check_star_norm_bound(long double gamma, int max_total,
                                  int num_chars, unsigned seed,
                                  long double slack_tol);

// Concavity of cut sums: for every tree tau with |tau| <= max_tree and every
// trunk sigma (empty or a proper tree trunk), with beta = c_{|sigma|},
//   sum_{tau^(2)=sigma} beta^{-c(tau^(1))} / tau^(1)!^gamma
//     <= c_{|sigma|} beta^{-1} (sum_{tau^(2)=sigma} 1/tau^(1)!)^gamma.
CheckReport check_concavity(long double gamma, int max_tree,
                            long double slack_tol);

// Counting bound: for proper tree trunks sigma of tau,
//   k_{tau,sigma} >= 1  and  |P'| <= exp(|sigma|^2 k_{tau,sigma}).
CheckReport check_counting(int max_tree);

// Exact cut-sum factorisation (gamma = 1, rational beta): the sum over cuts
// with trunk sigma factorizes over padded child arrangements.
CheckReport check_induction_identity(int max_tree, const Rational& beta);

// Exact identity sum_{|trunk|=l} tau!/(pruned! trunk!) = binomial(|tau|, l).
CheckReport check_tree_binomial(int max_tree);

// Exact multiplicativity of graded star products over split forests,
//   <X^n * Y^k, f g> = sum_{k1+k2=k} <X^..*Y^k1, f> <X^..*Y^k2, g>,
// for seeded random rational characters.
CheckReport check_forest_factorisation(int max_degree, int num_chars,
                                       unsigned seed);

// Tree-to-forest transfer of factorial decay: scale a so the tree norms of a
// random character satisfy |X^n|_T <= a^(gamma n)/n!^gamma, then verify the
// same bound for forest norms.
CheckReport check_factorial_decay_forest(long double gamma, int max_degree,
                                         int num_chars, unsigned seed,
                                         long double slack_tol);

// Multiplication bound in forest norm: with beta = c_k and a, b fitted so
// the tree norms of random characters satisfy |X^j|_T <= a^(gj)/j!^g for
// j <= max(n, n+k-1) and |Y^l|_T <= b^(gl)/l!^g for l <= k (the degrees the
// inductive proof actually uses),
//   |X^n * Y^k|_{F, gamma, beta/c~_k} <= a^(gn) b^(gk) / (n! k!)^g.
CheckReport check_computation_lemma(long double gamma, int max_total,
                                    int num_chars, unsigned seed,
                                    long double slack_tol);

// Appendix inequalities on the grid u,s,t(,v) in {0, 1/grid_div, ..., 1}.
CheckReport check_taylor_binomial(int n_max, int N_max, int grid_div,
                                  long double slack_tol);
// Agreement of taylor_tail_sum with its Simpson-quadrature integral form at
// three fixed (u,s,t) points for every N <= N_max, N+1 <= n <= n_max.
CheckReport check_taylor_identity(int n_max, int N_max, long double rel_tol);
// Agreement of kernel_value with the nested trapezoid quadrature on a 3x3x3
// (u,s,t) grid for m <= 3, m <= n <= 8.
CheckReport check_kernel_quadrature_agreement(long double rel_tol);
CheckReport check_overlapping(int n_max, int N_max, int m_max, int grid_div,
                              long double slack_tol);
CheckReport check_decreasing(int n_max, int N_max, int grid_div,
                             long double slack_tol);
CheckReport check_adjacent(int n_max, int N_max, int grid_div,
                           long double slack_tol);

// Remainder bound for the dyadic-partition construction, exercised on the
// normalized identity path (gamma = 1): scale <Y,tau> = lambda^|tau|
// (t-s)^|tau|/tau! with lambda = 1/beta_threshold so the degree-1 hypothesis
// holds with equality, then check for every tree with |tau| = n in `degrees`
// and every dyadic u <= s <= t with denominator dyadic_den that
//   |sum_{k>=N+1} Y^{n-k}_{u,s} * Y^k_{s,t}|_{T}
//     <= S^(N+1)(rho_u^{n/(N+1)})_{s,t} / (n-N-1)!.
CheckReport check_main_lemma_identity(int N, const std::vector<int>& degrees,
                                      int dyadic_den, long double slack_tol);

// Factorial-decay verdict for a concrete path.  `value_log` returns
// log|<X_{s,t}, tau>| for the pair at the given index.  Norms are estimated
// from the same pairs, so the strict verdict can be optimistic for sampled
// paths; `inflated` doubles the norm factor for a robust margin.
struct DecayCheckResult {
    CheckReport strict;
    CheckReport inflated;
    long double log_norm_factor = 0;
    long double log_cbar_strict = 0;
    long double log_cbar_inflated = 0;
};

DecayCheckResult verify_decay(
    long double gamma, int N, int max_tree, int alphabet,
    const std::vector<std::pair<long double, long double>>& pairs,
    const std::function<LogVal(const Tree&, std::size_t)>& value_log,
    long double slack_tol);

// Comparison of the two bounds for |int_0^1 x^n dy| with unit path norms:
// geometric n!(1+zeta(2g))^(n-1)/(n+1)!^g versus branched
// cbar_1^(n+1)/(n+1)^g.  Finds the crossover point n0 past which the
// branched bound is smaller; n0 is astronomically large, so it is located by
// bisection in log n.  Requires 1/2 < gamma <= 1.
struct CrossoverResult {
    bool exists = false;
    long double log_n0 = 0;    // natural log of the crossover index
    long double log10_n0 = 0;
    long double log_cbar1 = 0;
    bool dominant_after = false;  // spot-checked branched < geometric beyond n0
};

CrossoverResult branched_geometric_crossover(long double gamma,
                                             long double log_norm = 0.0L);

// Divergent cut sum of the corolla-with-stem family: exact value of
//   (a+b)^(-g(n+1)) sum (tau_n!/(p! t!))^g beta^(-c(p)-c(t)) a^(g|p|) b^(g|t|)
// and the closed-form lower bound (a+b)^(-g(n+1)) b^g beta^(-1)
// (a^g/beta + b^g)^n.
struct CounterexamplePoint {
    long double exact_sum = 0;
    long double lower_bound = 0;
};

CounterexamplePoint counterexample_point(int n, long double gamma,
                                         long double beta, long double a,
                                         long double b);

// Ratio of consecutive lower bounds, (a^g/beta + b^g) / (a+b)^g; the sum
// diverges geometrically whenever this exceeds 1.
long double counterexample_ratio_limit(long double gamma, long double beta,
                                       long double a, long double b);

struct CounterexampleResult {
    CheckReport report;
    std::vector<CounterexamplePoint> points;  // index n = 0..n_max
    int n_cross = -1;  // first n with exact_sum > threshold, -1 if none
};

// Verifies exact_sum >= lower_bound for every n <= n_max, that consecutive
// lower-bound ratios match the closed-form limit within ratio_tol, and that
// the exact sum exceeds `threshold` for some n <= n_max.
CounterexampleResult run_counterexample(long double gamma, long double beta,
                                        long double a, long double b,
                                        int n_max, long double threshold,
                                        long double ratio_tol);

}  // namespace branched
