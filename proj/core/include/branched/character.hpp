#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "branched/hopf.hpp"
#include "branched/rational.hpp"
#include "branched/trees.hpp"

namespace branched {

// Truncated functional on the forest algebra: a value for every forest up to
// max_degree, with the empty forest pinned to 1.  Reads beyond the truncation
// degree fail hard; there is no silent zero-extension past it.
template <class S>
class Character {
 public:
    explicit Character(int max_degree, int alphabet = 0)
        : max_degree_(max_degree), alphabet_(alphabet) {
        if (max_degree < 0)
            throw std::invalid_argument("max_degree must be >= 0");
        if (alphabet < 0)
            throw std::invalid_argument("alphabet must be >= 0");
    }

    int max_degree() const { return max_degree_; }
    int alphabet() const { return alphabet_; }

    void set(const Forest& f, S v) {
        check_degree(f);
        if (f.empty()) {
            if (!(v == S(1)))
                throw std::invalid_argument("the empty forest must map to 1");
            return;
        }
        values_[f.key()] = std::make_pair(f, std::move(v));
    }

    S value(const Forest& f) const {
        check_degree(f);
        if (f.empty()) return S(1);
        auto it = values_.find(f.key());
        if (it == values_.end()) return S(0);
        return it->second.second;
    }

    S value(const Tree& t) const { return value(Forest(t)); }

    const std::map<std::string, std::pair<Forest, S>>& entries() const {
        return values_;
    }

 private:
    void check_degree(const Forest& f) const {
        if (f.size() > max_degree_)
            throw std::domain_error("forest degree " + std::to_string(f.size()) +
                                    " exceeds truncation " +
                                    std::to_string(max_degree_));
    }

    int max_degree_;
    int alphabet_;
    std::map<std::string, std::pair<Forest, S>> values_;
};

// <X * Y, f> = sum <X, f^(1)> <Y, f^(2)> over the coproduct of f.
template <class S>
S star_value(const Character<S>& X, const Character<S>& Y, const Forest& f) {
    if (f.size() > X.max_degree() || f.size() > Y.max_degree())
        throw std::domain_error("star evaluated past a truncation degree");
    S acc(0);
    for (const CutTerm& term : coproduct_forest(f))
        acc += X.value(term.pruned) * Y.value(term.trunk) *
               from_bigint<S>(term.mult);
    return acc;
}

// <X^n * Y^k, f>: only the cut terms with |f^(1)| = n and |f^(2)| = k
// contribute; zero when |f| != n + k.
template <class S>
S graded_star_value(const Character<S>& X, int n, const Character<S>& Y, int k,
                    const Forest& f) {
    if (n < 0 || k < 0) throw std::invalid_argument("degrees must be >= 0");
    if (f.size() != n + k) return S(0);
    if (f.size() > X.max_degree() || f.size() > Y.max_degree())
        throw std::domain_error("star evaluated past a truncation degree");
    S acc(0);
    for (const CutTerm& term : coproduct_forest(f)) {
        if (term.pruned.size() != n) continue;
        acc += X.value(term.pruned) * Y.value(term.trunk) *
               from_bigint<S>(term.mult);
    }
    return acc;
}

// Materialized product character on all forests up to the common truncation.
template <class S>
Character<S> star(const Character<S>& X, const Character<S>& Y) {
    if (X.alphabet() != Y.alphabet())
        throw std::invalid_argument("star of characters over different alphabets");
    int deg = std::min(X.max_degree(), Y.max_degree());
    Character<S> out(deg, X.alphabet());
    for (int n = 1; n <= deg; ++n)
        for (const Forest& f : enumerate_forests(n, X.alphabet()))
            out.set(f, star_value(X, Y, f));
    return out;
}

template <class S>
Character<S> make_character_from_tree_values(
    int max_degree, int alphabet, const std::function<S(const Tree&)>& fn) {
    Character<S> out(max_degree, alphabet);
    std::map<std::string, S> tree_values;
    for (int n = 1; n <= max_degree; ++n)
        for (const Tree& t : enumerate_trees(n, alphabet)) {
            S v = fn(t);
            tree_values.emplace(t.key(), v);
            out.set(Forest(t), std::move(v));
        }
    for (int n = 2; n <= max_degree; ++n)
        for (const Forest& f : enumerate_forests(n, alphabet)) {
            if (f.count() < 2) continue;
            S prod(1);
            for (const Tree& t : f.trees()) prod *= tree_values.at(t.key());
            out.set(f, std::move(prod));
        }
    return out;
}

inline Character<Rational> random_rational_character(int max_degree,
                                                     int alphabet,
                                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    return make_character_from_tree_values<Rational>(
        max_degree, alphabet, [&](const Tree&) {
            int p = num(rng);
            int q = den(rng);
            return Rational(p, q);
        });
}

// Values of the canonical monotone lift: <X_{s,t}, tau> = (t-s)^|tau| / tau!.
inline Character<Rational> identity_character(int max_degree, const Rational& s,
                                              const Rational& t,
                                              int alphabet = 0) {
    return make_character_from_tree_values<Rational>(
        max_degree, alphabet, [&](const Tree& tree) {
            return rational_pow(t - s, tree.size()) /
                   Rational(tree_factorial(tree));
        });
}

// First forest (up to the truncation) whose value differs from the product of
// its tree values, or nullopt if X is multiplicative.  tol == 0 compares
// exactly; otherwise |diff| <= tol * (1 + |product|) passes.
template <class S>
std::optional<Forest> is_character(const Character<S>& X,
                                   long double tol = 0.0L) {
    for (int n = 2; n <= X.max_degree(); ++n)
        for (const Forest& f : enumerate_forests(n, X.alphabet())) {
            if (f.count() < 2) continue;
            S prod(1);
            for (const Tree& t : f.trees()) prod *= X.value(Forest(t));
            S diff = X.value(f) - prod;
            if (tol == 0.0L) {
                if (!(diff == S(0))) return f;
            } else {
                long double d = std::fabs(to_ld(diff));
                long double scale = 1.0L + std::fabs(to_ld(prod));
                if (d > tol * scale) return f;
            }
        }
    return std::nullopt;
}

// Weighted degree-k norms.  Tree norm:
//   max over trees |tau| = k of |<X, tau>| beta (tau! / k!)^gamma,
// forest norm the same with beta^(number of trees).  Both live in log space;
// degree 0 is normalized to 1.
template <class S>
LogVal tree_norm_log(const Character<S>& X, int k, long double gamma,
                     long double log_beta) {
    if (k == 0) return LogVal::from_log(0.0L);
    LogVal best;
    LogVal lkfact = log_abs(Rational(factorial_big(k)));
    for (const Tree& t : enumerate_trees(k, X.alphabet())) {
        LogVal v = log_abs(X.value(t));
        if (v.zero) continue;
        v.lg += log_beta;
        v.lg += gamma * (log_abs(Rational(tree_factorial(t))).lg - lkfact.lg);
        best = lv_max(best, v);
    }
    return best;
}

template <class S>
LogVal forest_norm_log(const Character<S>& X, int k, long double gamma,
                       long double log_beta) {
    if (k == 0) return LogVal::from_log(0.0L);
    LogVal best;
    LogVal lkfact = log_abs(Rational(factorial_big(k)));
    for (const Forest& f : enumerate_forests(k, X.alphabet())) {
        LogVal v = log_abs(X.value(f));
        if (v.zero) continue;
        v.lg += static_cast<long double>(f.count()) * log_beta;
        v.lg += gamma * (log_abs(Rational(forest_factorial(f))).lg - lkfact.lg);
        best = lv_max(best, v);
    }
    return best;
}

}  // namespace branched
