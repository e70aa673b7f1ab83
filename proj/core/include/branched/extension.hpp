#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "branched/hopf.hpp"
#include "branched/lift.hpp"
#include "branched/poly.hpp"
#include "branched/rational.hpp"
#include "branched/trees.hpp"

namespace branched {

// Raised when a step-size ladder hits its level cap without meeting the
// requested tolerance.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A two-parameter family of increment characters: tree values over [a, b].
// Forest values are the products of the tree values.
template <class S>
class PathSource {
 public:
    virtual ~PathSource() = default;
    virtual int alphabet() const = 0;
    // Largest tree size servable, -1 for unlimited.
    virtual int degree_limit() const { return -1; }
    virtual S tree_value(const Tree& t, const S& a, const S& b) const = 0;

    S forest_value(const Forest& f, const S& a, const S& b) const {
        S acc(1);
        for (const Tree& t : f.trees()) acc *= tree_value(t, a, b);
        return acc;
    }
};

// <X_{a,b}, tau> = (b-a)^|tau| / tau!, the lift of x(t) = t.
template <class S>
class IdentitySource final : public PathSource<S> {
 public:
    int alphabet() const override { return 0; }
    S tree_value(const Tree& t, const S& a, const S& b) const override {
        if constexpr (std::is_same_v<S, Rational>) {
            return rational_pow(b - a, t.size()) /
                   Rational(tree_factorial(t));
        } else {
            return std::pow(b - a, static_cast<S>(t.size())) /
                   static_cast<S>(to_ld(tree_factorial(t)));
        }
    }
};

// Exact lift of a polynomial path.
class PolySource final : public PathSource<Rational> {
 public:
    explicit PolySource(std::vector<Poly> components)
        : lift_(std::move(components)) {}

    int alphabet() const override {
        return lift_.dimension() == 1 ? 0 : lift_.dimension();
    }
    Rational tree_value(const Tree& t, const Rational& a,
                        const Rational& b) const override {
        return lift_.tree_value(t, a, b);
    }
    const PolynomialLift& lift() const { return lift_; }

 private:
    PolynomialLift lift_;
};

// Degree cap on another source; reads past the cap fail hard.
template <class S>
class TruncatedSource final : public PathSource<S> {
 public:
    TruncatedSource(const PathSource<S>& base, int cap)
        : base_(base), cap_(cap) {
        if (cap < 1) throw std::invalid_argument("degree cap must be >= 1");
    }
    int alphabet() const override { return base_.alphabet(); }
    int degree_limit() const override { return cap_; }
    S tree_value(const Tree& t, const S& a, const S& b) const override {
        if (t.size() > cap_)
            throw std::domain_error("tree degree beyond the truncation cap");
        return base_.tree_value(t, a, b);
    }

 private:
    const PathSource<S>& base_;
    int cap_;
};

namespace detail {

template <class S>
void check_partition(const std::vector<S>& P) {
    if (P.size() < 2)
        throw std::invalid_argument("partition needs at least two points");
    for (std::size_t i = 1; i < P.size(); ++i)
        if (!(P[i - 1] < P[i]))
            throw std::invalid_argument(
                "partition points must strictly increase");
}

}  // namespace detail

// One compensated Riemann sum of the extension construction:
//   sum_{i=0}^{m-1} sum_{k=1}^{N} < X^{n-k}_{s,t_i} * X^k_{t_i,t_{i+1}}, f >
// with s = P.front() and n = |f|.  X must serve every degree that appears
// (full characters; the recursive extension keeps its own version of this
// sum).  Defined for n >= N + 1.
template <class S>
S partition_sum(const PathSource<S>& X, const std::vector<S>& P,
                const Forest& f, int N) {
    if (N < 1) throw std::invalid_argument("truncation degree must be >= 1");
    if (f.size() < N + 1)
        throw std::invalid_argument(
            "partition sums are defined above the truncation degree");
    detail::check_partition(P);
    S acc(0);
    const S& s = P.front();
    for (std::size_t i = 0; i + 1 < P.size(); ++i)
        for (const CutTerm& term : coproduct_forest(f)) {
            int k = term.trunk.size();
            if (k < 1 || k > N) continue;
            acc += X.forest_value(term.pruned, s, P[i]) *
                   X.forest_value(term.trunk, P[i], P[i + 1]) *
                   from_bigint<S>(term.mult);
        }
    return acc;
}

// Richardson table for a quantity with an error expansion in integer powers
// of the step size; each push halves the step.
template <class S>
class RichardsonTable {
 public:
    void push(S v) {
        std::vector<S> row{std::move(v)};
        for (std::size_t c = 1; c <= rows_.size(); ++c) {
            S p = power_of_two(c);
            row.push_back((p * row[c - 1] - rows_.back()[c - 1]) /
                          (p - S(1)));
        }
        rows_.push_back(std::move(row));
    }
    std::size_t size() const { return rows_.size(); }
    const S& diag() const { return rows_.back().back(); }
    const S& diag_prev() const {
        return rows_[rows_.size() - 2][rows_.size() - 2];
    }

 private:
    static S power_of_two(std::size_t c) {
        if constexpr (std::is_same_v<S, Rational>)
            return rational_pow(Rational(2), static_cast<long>(c));
        else
            return std::pow(S(2), static_cast<S>(c));
    }
    std::vector<std::vector<S>> rows_;
};

// Degree-by-degree extension of a truncated character by compensated Riemann
// sums over dyadic refinements, anchored at a fixed left endpoint.  Rational
// scalars stop when the extrapolation diagonal stabilizes exactly (partition
// sums of polynomial data are polynomials in the reciprocal mesh size);
// floating scalars stop when consecutive diagonals differ by at most tol.
template <class S>
class Extender {
 public:
    Extender(const PathSource<S>& base, int N, S anchor, int level_cap = 14,
             long double tol = 0.0L)
        : base_(base), N_(N), s_(std::move(anchor)), cap_(level_cap),
          tol_(tol) {
        if (N_ < 1) throw std::invalid_argument("truncation degree must be >= 1");
        if (base_.degree_limit() >= 0 && base_.degree_limit() < N_)
            throw std::invalid_argument("source does not reach the truncation");
        if (cap_ < 3) throw std::invalid_argument("level cap too small");
        if constexpr (!std::is_same_v<S, Rational>) {
            if (!(tol_ > 0))
                throw std::invalid_argument(
                    "floating extension needs a positive tolerance");
        }
    }

    const S& anchor() const { return s_; }
    int truncation() const { return N_; }

    // <X_{anchor, b}, tau> for any tree size.
    S value(const Tree& t, const S& b) {
        if (t.size() <= N_) return base_.tree_value(t, s_, b);
        auto key = std::make_pair(t.key(), b);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        S v = extend_tree(t, b);
        return memo_.emplace(std::move(key), std::move(v)).first->second;
    }

    S forest_value(const Forest& f, const S& b) {
        S acc(1);
        for (const Tree& t : f.trees()) acc *= value(t, b);
        return acc;
    }

    int last_levels() const { return last_levels_; }

    // Diagonal movements of the most recent fresh ladder, for the soft
    // refinement diagnostics.
    const std::vector<long double>& last_deltas() const { return last_deltas_; }

 private:
    S extend_tree(const Tree& t, const S& b) {
        if (b == s_) return S(0);
        if (!(s_ < b))
            throw std::invalid_argument("extension queries need b > anchor");
        RichardsonTable<S> rich;
        last_deltas_.clear();
        for (int r = 1; r <= cap_; ++r) {
            rich.push(level_sum(t, b, r));
            if (rich.size() >= 2) {
                if constexpr (std::is_same_v<S, Rational>) {
                    bool stable = rich.diag() == rich.diag_prev();
                    last_deltas_.push_back(
                        stable ? 0.0L
                               : std::fabs(to_ld(rich.diag() -
                                                 rich.diag_prev())));
                    if (stable && rich.size() >= 3) {
                        last_levels_ = r;
                        return rich.diag();
                    }
                } else {
                    long double d = std::fabs(
                        static_cast<long double>(rich.diag() - rich.diag_prev()));
                    last_deltas_.push_back(d);
                    if (d <= tol_) {
                        last_levels_ = r;
                        return rich.diag();
                    }
                }
            }
        }
        throw NonConvergence("extension ladder for " + t.key() +
                             " did not stabilize within " +
                             std::to_string(cap_) + " levels");
    }

    // Partition sum over the dyadic partition of [anchor, b] with 2^r pieces,
    // using extended values left of each partition point.
    S level_sum(const Tree& t, const S& b, int r) {
        std::size_t m = std::size_t(1) << r;
        std::vector<S> P(m + 1);
        S width = b - s_;
        for (std::size_t i = 0; i <= m; ++i)
            P[i] = s_ + width * S(static_cast<long>(i)) / S(static_cast<long>(m));
        P.back() = b;
        std::vector<const CutTerm*> active;
        for (const CutTerm& term : coproduct_tree(t))
            if (term.trunk.size() >= 1 && term.trunk.size() <= N_)
                active.push_back(&term);
        S acc(0);
        for (std::size_t i = 0; i + 1 < P.size(); ++i)
            for (const CutTerm* term : active)
                acc += forest_value(term->pruned, P[i]) *
                       base_.forest_value(term->trunk, P[i], P[i + 1]) *
                       from_bigint<S>(term->mult);
        return acc;
    }

    const PathSource<S>& base_;
    int N_;
    S s_;
    int cap_;
    long double tol_;
    int last_levels_ = 0;
    std::vector<long double> last_deltas_;
    std::map<std::pair<std::string, S>, S> memo_;
};

template <class S>
struct DropPointResult {
    S lhs;
    S rhs;
};

// Both sides of the single-point refinement identity.  Dropping the interior
// point t_j from P changes the compensated sums of degree k >= N+1 by a
// boundary term localized at t_{j-1} < t_j < t_{j+1}:
//   sum_{k >= N+1} < X^{n-k}_{u,s} * (X^{P,k}_{s,t} - X^{P minus t_j,k}_{s,t}), tau >
//     = sum_{k2 + k3 >= N+1, 1 <= k3 <= N}
//         < X^{n-k2-k3}_{u,t_{j-1}} * X^{k2}_{t_{j-1},t_j} * X^{k3}_{t_j,t_{j+1}}, tau >.
// X must be a full character; the two values are returned for comparison.
template <class S>
DropPointResult<S> drop_point_residual(const PathSource<S>& X, const Tree& tau,
                                       const S& u, const std::vector<S>& P,
                                       std::size_t j, int N) {
    if (N < 1) throw std::invalid_argument("truncation degree must be >= 1");
    detail::check_partition(P);
    if (P.size() < 3 || j == 0 || j + 1 >= P.size())
        throw std::invalid_argument("drop point must be interior");
    if (!(u <= P.front()))
        throw std::invalid_argument("outer anchor must sit left of the partition");

    std::vector<S> Q;
    for (std::size_t i = 0; i < P.size(); ++i)
        if (i != j) Q.push_back(P[i]);

    DropPointResult<S> out{S(0), S(0)};
    for (const CutTerm& term : coproduct_tree(tau)) {
        int k = term.trunk.size();
        if (k < N + 1) continue;
        S diff = partition_sum(X, P, term.trunk, N) -
                 partition_sum(X, Q, term.trunk, N);
        out.lhs += X.forest_value(term.pruned, u, P.front()) * diff *
                   from_bigint<S>(term.mult);
    }

    for (const CutTerm& t1 : coproduct_tree(tau))
        for (const CutTerm& t2 : coproduct_forest(t1.trunk)) {
            int k2 = t2.pruned.size();
            int k3 = t2.trunk.size();
            if (k3 < 1 || k3 > N || k2 + k3 < N + 1) continue;
            out.rhs += X.forest_value(t1.pruned, u, P[j - 1]) *
                       X.forest_value(t2.pruned, P[j - 1], P[j]) *
                       X.forest_value(t2.trunk, P[j], P[j + 1]) *
                       from_bigint<S>(t1.mult * t2.mult);
        }
    return out;
}

}  // namespace branched
