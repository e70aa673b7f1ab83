#include "branched/hopf.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace branched {

namespace {

using TermMap = std::map<std::pair<std::string, std::string>, CutTerm>;

void accumulate(TermMap& m, Forest pruned, Forest trunk, BigInt mult) {
    auto key = std::make_pair(pruned.key(), trunk.key());
    auto it = m.find(key);
    if (it == m.end())
        m.emplace(std::move(key),
                  CutTerm{std::move(pruned), std::move(trunk), std::move(mult)});
    else
        it->second.mult += mult;
}

std::vector<CutTerm> to_terms(TermMap&& m) {
    std::vector<CutTerm> out;
    out.reserve(m.size());
    for (auto& [k, v] : m) out.push_back(std::move(v));
    return out;
}

std::recursive_mutex coproduct_mutex;
std::map<std::string, std::unique_ptr<const std::vector<CutTerm>>> coproduct_cache;

const std::vector<CutTerm>& coproduct_locked(const Forest& f);

std::vector<CutTerm> coproduct_of_tree(const Tree& t) {
    // Product of the child coproducts, then id (x) B_+, then the formal term.
    std::vector<CutTerm> acc{CutTerm{Forest(), Forest(), BigInt(1)}};
    for (const Tree& c : t.children()) {
        const auto& cd = coproduct_locked(Forest(c));
        TermMap next;
        for (const CutTerm& a : acc)
            for (const CutTerm& b : cd)
                accumulate(next, a.pruned.concat(b.pruned),
                           a.trunk.concat(b.trunk), a.mult * b.mult);
        acc = to_terms(std::move(next));
    }
    TermMap out;
    accumulate(out, Forest(t), Forest(), BigInt(1));
    for (const CutTerm& a : acc)
        accumulate(out, a.pruned, Forest(join(a.trunk, t.label())), a.mult);
    return to_terms(std::move(out));
}

std::vector<CutTerm> coproduct_of_forest(const Forest& f) {
    if (f.empty()) return {CutTerm{Forest(), Forest(), BigInt(1)}};
    if (f.count() == 1) return coproduct_of_tree(f.trees()[0]);
    std::vector<CutTerm> acc{CutTerm{Forest(), Forest(), BigInt(1)}};
    for (const Tree& t : f.trees()) {
        const auto& td = coproduct_locked(Forest(t));
        TermMap next;
        for (const CutTerm& a : acc)
            for (const CutTerm& b : td)
                accumulate(next, a.pruned.concat(b.pruned),
                           a.trunk.concat(b.trunk), a.mult * b.mult);
        acc = to_terms(std::move(next));
    }
    return acc;
}

const std::vector<CutTerm>& coproduct_locked(const Forest& f) {
    auto it = coproduct_cache.find(f.key());
    if (it != coproduct_cache.end()) return *it->second;
    auto value = std::make_unique<const std::vector<CutTerm>>(coproduct_of_forest(f));
    return *coproduct_cache.emplace(f.key(), std::move(value)).first->second;
}

}  // namespace

const std::vector<CutTerm>& coproduct_forest(const Forest& f) {
    std::lock_guard<std::recursive_mutex> lock(coproduct_mutex);
    return coproduct_locked(f);
}

const std::vector<CutTerm>& coproduct_tree(const Tree& t) {
    return coproduct_forest(Forest(t));
}

TripleTerms double_coproduct_left(const Forest& f) {
    TripleTerms out;
    for (const CutTerm& a : coproduct_forest(f))
        for (const CutTerm& b : coproduct_forest(a.pruned))
            out[{b.pruned.key(), b.trunk.key(), a.trunk.key()}] += a.mult * b.mult;
    return out;
}

TripleTerms double_coproduct_right(const Forest& f) {
    TripleTerms out;
    for (const CutTerm& a : coproduct_forest(f))
        for (const CutTerm& b : coproduct_forest(a.trunk))
            out[{a.pruned.key(), b.pruned.key(), b.trunk.key()}] += a.mult * b.mult;
    return out;
}

namespace {

bool match_children(const std::vector<Tree>& sc, const std::vector<Tree>& tc);

bool is_trunk_tree(const Tree& sigma, const Tree& tau) {
    if (sigma.label() != tau.label()) return false;
    if (sigma.size() > tau.size()) return false;
    return match_children(sigma.children(), tau.children());
}

// Injective assignment of sigma-children to distinct tau-children, each pair
// related by is_trunk.  Exhaustive backtracking; arities here are tiny.
bool match_children(const std::vector<Tree>& sc, const std::vector<Tree>& tc) {
    if (sc.size() > tc.size()) return false;
    std::vector<bool> used(tc.size(), false);
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == sc.size()) return true;
        for (std::size_t j = 0; j < tc.size(); ++j) {
            if (used[j] || !is_trunk_tree(sc[i], tc[j])) continue;
            used[j] = true;
            if (self(self, i + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    return rec(rec, 0);
}

}  // namespace

bool is_trunk(const Tree& sigma, const Tree& tau) {
    return is_trunk_tree(sigma, tau);
}

bool is_trunk(const Forest& sigma, const Forest& tau) {
    if (sigma.empty()) return true;
    if (sigma.size() > tau.size()) return false;
    std::vector<bool> used(tau.trees().size(), false);
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == sigma.trees().size()) return true;
        for (std::size_t j = 0; j < tau.trees().size(); ++j) {
            if (used[j] || !is_trunk_tree(sigma.trees()[i], tau.trees()[j]))
                continue;
            used[j] = true;
            if (self(self, i + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    return rec(rec, 0);
}

Rational cut_sum_over_trunk_rational(const Tree& tau, const Forest& trunk,
                                     const Rational& beta) {
    Rational acc(0);
    for (const CutTerm& term : coproduct_tree(tau)) {
        if (term.trunk != trunk) continue;
        Rational w(term.mult);
        w /= Rational(forest_factorial(term.pruned));
        w *= rational_pow(beta, -term.pruned.count());
        acc += w;
    }
    return acc;
}

LogVal cut_sum_over_trunk_log(const Tree& tau, const Forest& trunk,
                              long double gamma, long double log_beta) {
    LogVal acc;
    for (const CutTerm& term : coproduct_tree(tau)) {
        if (term.trunk != trunk) continue;
        LogVal t = log_abs(Rational(term.mult));
        t.lg -= static_cast<long double>(term.pruned.count()) * log_beta;
        t.lg -= gamma * log_abs(Rational(forest_factorial(term.pruned))).lg;
        acc = lv_add(acc, t);
    }
    return acc;
}

Rational tree_binomial(const Tree& tau, int l) {
    if (l < 0 || l > tau.size())
        throw std::invalid_argument("trunk size out of range");
    Rational acc(0);
    Rational tf(tree_factorial(tau));
    for (const CutTerm& term : coproduct_tree(tau)) {
        if (term.trunk.size() != l) continue;
        Rational w(term.mult);
        w *= tf;
        w /= Rational(forest_factorial(term.pruned));
        w /= Rational(forest_factorial(term.trunk));
        acc += w;
    }
    return acc;
}

PermutationClasses permutation_classes(const Tree& tau, const Tree& sigma) {
    const auto& tc = tau.children();
    const auto& sc = sigma.children();
    if (sc.size() > tc.size())
        throw std::invalid_argument(
            "sigma has higher root arity than tau; no padded arrangements");
    // Padded child list of sigma: its children plus empty slots up to the
    // arity of tau.  Arrangements are enumerated as distinct permutations of
    // the key multiset.
    std::map<std::string, const Tree*> by_key;
    for (const Tree& s : sc) by_key.emplace(s.key(), &s);
    std::vector<std::string> slots;
    for (const Tree& s : sc) slots.push_back(s.key());
    slots.resize(tc.size(), "1");
    std::sort(slots.begin(), slots.end());

    PermutationClasses out;
    out.p_sigma = 0;
    out.p_prime = 0;
    do {
        out.p_sigma += 1;
        bool admissible = true;
        int proper = 0;
        for (std::size_t i = 0; i < tc.size() && admissible; ++i) {
            if (slots[i] == "1") {
                ++proper;  // children of tau are non-empty trees
                continue;
            }
            const Tree& s = *by_key.at(slots[i]);
            if (!is_trunk_tree(s, tc[i]))
                admissible = false;
            else if (s.key() != tc[i].key())
                ++proper;
        }
        if (admissible) {
            out.p_prime += 1;
            if (out.k_min < 0 || proper < out.k_min) out.k_min = proper;
        }
    } while (std::next_permutation(slots.begin(), slots.end()));
    return out;
}

std::vector<Forest> proper_tree_trunks(const Tree& tau, bool include_empty) {
    std::map<std::string, Forest> seen;
    for (const CutTerm& term : coproduct_tree(tau)) {
        if (term.trunk.empty()) {
            if (include_empty) seen.emplace(term.trunk.key(), term.trunk);
            continue;
        }
        if (term.trunk.count() != 1) continue;
        if (term.trunk.key() == tau.key()) continue;
        seen.emplace(term.trunk.key(), term.trunk);
    }
    std::vector<Forest> out;
    for (auto& [k, f] : seen) out.push_back(std::move(f));
    return out;
}

}  // namespace branched
