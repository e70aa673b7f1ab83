#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "branched/rational.hpp"
#include "branched/trees.hpp"

namespace branched {

// One aggregated term of the Connes-Kreimer coproduct: mult * pruned (x)
// trunk.  The list for a tree always contains the formal term tau (x) 1 and
// the empty cut 1 (x) tau.
struct CutTerm {
    Forest pruned;
    Forest trunk;
    BigInt mult;
};

// Coproduct of a tree, computed by the recursion
//   Delta tau = tau (x) 1 + (id (x) B_+) Delta(children forest)
// and aggregated over equal (pruned, trunk) pairs.  Memoized; the returned
// reference stays valid for the lifetime of the process.
const std::vector<CutTerm>& coproduct_tree(const Tree& t);

// Multiplicative extension to forests.  Memoized as well.
const std::vector<CutTerm>& coproduct_forest(const Forest& f);

// Three-slot expansions used for coassociativity and for products of three
// characters.  Keys are the canonical forest keys of the slots.
using TripleTerms = std::map<std::array<std::string, 3>, BigInt>;
TripleTerms double_coproduct_left(const Forest& f);   // (Delta (x) id) Delta
TripleTerms double_coproduct_right(const Forest& f);  // (id (x) Delta) Delta

// True if sigma is a trunk of tau: sigma appears as tau^(2) in some
// admissible cut, i.e. sigma embeds into tau at the root.  The empty-tree
// case is handled by the Forest overload.
bool is_trunk(const Tree& sigma, const Tree& tau);
bool is_trunk(const Forest& sigma, const Forest& tau);

// sum_{tau^(2) = trunk} mult / pruned-factorial, exactly (gamma = 1), with an
// optional rational beta weight beta^{-count(pruned)}.
Rational cut_sum_over_trunk_rational(const Tree& tau, const Forest& trunk,
                                     const Rational& beta = Rational(1));

// Same sum with real exponents, in log space:
//   sum_{tau^(2) = trunk} mult * beta^{-count(pruned)} / pruned-factorial^gamma.
LogVal cut_sum_over_trunk_log(const Tree& tau, const Forest& trunk,
                              long double gamma, long double log_beta);

// sum over cuts with |trunk| = l of tau! / (pruned! * trunk!).  Equals
// binomial(|tau|, l); the identity is checked exactly in the tests.
Rational tree_binomial(const Tree& tau, int l);

// Arrangement data for a pair of trees tau = [t_1 .. t_n], sigma =
// [s_1 .. s_m] with m <= n (sigma's children padded with empty slots).
//   p_sigma: number of distinct arrangements of the padded child multiset.
//   p_prime: arrangements pi with s_pi(i) a trunk of t_i for every i.
//   k_min:   minimum over those arrangements of #{i : s_pi(i) proper trunk},
//            or -1 when p_prime == 0.
struct PermutationClasses {
    BigInt p_sigma;
    BigInt p_prime;
    int k_min = -1;
};
PermutationClasses permutation_classes(const Tree& tau, const Tree& sigma);

// Distinct tree trunks sigma with sigma proper trunk of tau (sigma != tau),
// including the empty trunk when include_empty is set.  Sorted by key.
std::vector<Forest> proper_tree_trunks(const Tree& tau, bool include_empty);

}  // namespace branched
