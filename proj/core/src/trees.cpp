#include "branched/trees.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <stdexcept>

namespace branched {

namespace {

std::string label_suffix(int label) {
    return label == 0 ? std::string() : std::to_string(label);
}

}  // namespace

Tree::Tree(int label) : label_(label) {
    if (label < 0) throw std::invalid_argument("tree label must be >= 0");
    key_ = "*" + label_suffix(label);
}

Tree::Tree(int label, std::vector<Tree> children)
    : label_(label), children_(std::move(children)) {
    if (label < 0) throw std::invalid_argument("tree label must be >= 0");
    std::sort(children_.begin(), children_.end());
    for (const Tree& c : children_) {
        size_ += c.size();
        height_ = std::max(height_, c.height() + 1);
    }
    if (children_.empty()) {
        key_ = "*" + label_suffix(label);
    } else {
        key_ = "[";
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (i) key_ += '.';
            key_ += children_[i].key();
        }
        key_ += ']';
        key_ += label_suffix(label);
    }
}

Forest::Forest(std::vector<Tree> trees) : trees_(std::move(trees)) {
    std::sort(trees_.begin(), trees_.end());
    for (const Tree& t : trees_) size_ += t.size();
    if (trees_.empty()) {
        key_ = "1";
    } else {
        key_.clear();
        for (std::size_t i = 0; i < trees_.size(); ++i) {
            if (i) key_ += '.';
            key_ += trees_[i].key();
        }
    }
}

Forest Forest::concat(const Forest& o) const {
    std::vector<Tree> all = trees_;
    all.insert(all.end(), o.trees_.begin(), o.trees_.end());
    return Forest(std::move(all));
}

Forest Forest::concat(const Tree& t) const {
    std::vector<Tree> all = trees_;
    all.push_back(t);
    return Forest(std::move(all));
}

Tree single_vertex(int label) { return Tree(label); }

Tree join(const Forest& children, int label) {
    return Tree(label, children.trees());
}

BigInt tree_factorial(const Tree& t) {
    BigInt r(t.size());
    for (const Tree& c : t.children()) r *= tree_factorial(c);
    return r;
}

BigInt forest_factorial(const Forest& f) {
    BigInt r(1);
    for (const Tree& t : f.trees()) r *= tree_factorial(t);
    return r;
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    char peek() const { return pos < s.size() ? s[pos] : '\0'; }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("parse error at position " +
                                    std::to_string(pos) + ": " + what +
                                    " in \"" + s + "\"");
    }

    int parse_label() {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) return 0;
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (s[pos] - '0');
            ++pos;
            if (v > 1000000) fail("label out of range");
        }
        if (v == 0) fail("label must be >= 1");
        return static_cast<int>(v);
    }

    Tree tree() {
        if (peek() == '*') {
            ++pos;
            return Tree(parse_label());
        }
        if (peek() == '[') {
            ++pos;
            Forest f = forest();
            if (peek() != ']') fail("expected ']'");
            ++pos;
            return join(f, parse_label());
        }
        fail("expected '*' or '['");
    }

    Forest forest() {
        if (peek() == '1') {
            ++pos;
            return Forest();
        }
        std::vector<Tree> ts;
        ts.push_back(tree());
        while (peek() == '.') {
            ++pos;
            ts.push_back(tree());
        }
        return Forest(std::move(ts));
    }
};

}  // namespace

Tree parse_tree(const std::string& text) {
    Parser p{text};
    Tree t = p.tree();
    if (p.pos != text.size()) p.fail("trailing characters");
    return t;
}

Forest parse_forest(const std::string& text) {
    Parser p{text};
    Forest f = p.forest();
    if (p.pos != text.size()) p.fail("trailing characters");
    return f;
}

void validate_label(int label, int alphabet) {
    if (alphabet < 0) throw std::invalid_argument("alphabet must be >= 0");
    if (alphabet == 0) {
        if (label != 0)
            throw std::invalid_argument("label " + std::to_string(label) +
                                        " not allowed in unlabelled mode");
        return;
    }
    if (label < 1 || label > alphabet)
        throw std::invalid_argument("label " + std::to_string(label) +
                                    " outside alphabet 1.." +
                                    std::to_string(alphabet));
}

namespace {

std::mutex enum_mutex;
std::map<std::pair<int, int>, std::vector<Forest>> forest_cache;

std::vector<Forest> forests_uncached(int n, int alphabet);

const std::vector<Forest>& forests_cached(int n, int alphabet) {
    auto key = std::make_pair(n, alphabet);
    auto it = forest_cache.find(key);
    if (it != forest_cache.end()) return it->second;
    auto value = forests_uncached(n, alphabet);
    return forest_cache.emplace(key, std::move(value)).first->second;
}

std::vector<Tree> trees_unlocked(int n, int alphabet) {
    std::vector<Tree> out;
    if (n <= 0) return out;
    for (const Forest& f : forests_cached(n - 1, alphabet)) {
        if (alphabet == 0) {
            out.push_back(join(f, 0));
        } else {
            for (int label = 1; label <= alphabet; ++label)
                out.push_back(join(f, label));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Forest> forests_uncached(int n, int alphabet) {
    std::vector<Forest> out;
    if (n == 0) {
        out.emplace_back();
        return out;
    }
    // Pool of all trees with size <= n; multisets are generated as
    // non-decreasing index sequences over the pool, which hits each exactly
    // once.
    std::vector<Tree> pool;
    for (int k = 1; k <= n; ++k) {
        auto tk = trees_unlocked(k, alphabet);
        pool.insert(pool.end(), tk.begin(), tk.end());
    }
    std::vector<Tree> current;
    auto rec = [&](auto&& self, std::size_t start, int remaining) -> void {
        if (remaining == 0) {
            out.push_back(Forest(current));
            return;
        }
        for (std::size_t i = start; i < pool.size(); ++i) {
            if (pool[i].size() > remaining) continue;
            current.push_back(pool[i]);
            self(self, i, remaining - pool[i].size());
            current.pop_back();
        }
    };
    rec(rec, 0, n);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<Tree> enumerate_trees(int n, int alphabet) {
    if (n < 0) throw std::invalid_argument("vertex count must be >= 0");
    if (alphabet < 0) throw std::invalid_argument("alphabet must be >= 0");
    std::lock_guard<std::mutex> lock(enum_mutex);
    return trees_unlocked(n, alphabet);
}

std::vector<Forest> enumerate_forests(int n, int alphabet) {
    if (n < 0) throw std::invalid_argument("vertex count must be >= 0");
    if (alphabet < 0) throw std::invalid_argument("alphabet must be >= 0");
    std::lock_guard<std::mutex> lock(enum_mutex);
    return forests_cached(n, alphabet);
}

BigInt count_trees(int n, int alphabet) {
    if (n < 0) throw std::invalid_argument("vertex count must be >= 0");
    if (n == 0) return BigInt(0);
    // t(m) = d * f(m-1) with f the Euler transform of t:
    //   m * f(m) = sum_{k=1}^{m} ( sum_{j | k} j * t(j) ) * f(m - k).
    // d = 1 reproduces 1, 1, 2, 4, 9, 20, 48, ...
    BigInt d(alphabet == 0 ? 1 : alphabet);
    std::vector<BigInt> t(n + 1, BigInt(0)), f(n + 1, BigInt(0)),
        c(n + 1, BigInt(0));
    f[0] = 1;
    t[1] = d;
    for (int m = 1; m <= n; ++m) {
        if (m > 1) t[m] = d * f[m - 1];
        c[m] = 0;
        for (int j = 1; j <= m; ++j)
            if (m % j == 0) c[m] += BigInt(j) * t[j];
        if (m < n) {
            BigInt acc(0);
            for (int k = 1; k <= m; ++k) acc += c[k] * f[m - k];
            f[m] = acc / m;
        }
    }
    return t[n];
}

BigInt count_trees_upto(int n, int alphabet) {
    if (n < 1) throw std::invalid_argument("vertex count must be >= 1");
    BigInt r(0);
    for (int k = 1; k <= n; ++k) r += count_trees(k, alphabet);
    return r;
}

}  // namespace branched
