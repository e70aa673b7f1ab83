#pragma once

#include <string>
#include <vector>

#include "branched/rational.hpp"

namespace branched {

// Rooted tree with an optional component label on every vertex.  Label 0
// means unlabelled; labelled enumeration uses labels 1..d.  Children are kept
// sorted by canonical key, so structurally equal trees compare equal and the
// key is a canonical form.
//
// Canonical textual notation:
//   leaf               ->  "*"        (labelled: "*2")
//   root over a forest ->  "[" children joined by "." "]"  (labelled: "[..]2")
//   empty forest       ->  "1"
class Tree {
 public:
    explicit Tree(int label = 0);
    Tree(int label, std::vector<Tree> children);

    int label() const { return label_; }
    const std::vector<Tree>& children() const { return children_; }
    int size() const { return size_; }
    int height() const { return height_; }
    const std::string& key() const { return key_; }

    bool operator==(const Tree& o) const { return key_ == o.key_; }
    bool operator!=(const Tree& o) const { return key_ != o.key_; }
    bool operator<(const Tree& o) const { return key_ < o.key_; }

 private:
    int label_ = 0;
    std::vector<Tree> children_;
    int size_ = 1;
    int height_ = 1;
    std::string key_;
};

// Finite multiset of trees, kept sorted by key.  The empty forest is the unit
// of the polynomial algebra and prints as "1".
class Forest {
 public:
    Forest() { key_ = "1"; }
    explicit Forest(std::vector<Tree> trees);
    explicit Forest(const Tree& t) : Forest(std::vector<Tree>{t}) {}

    const std::vector<Tree>& trees() const { return trees_; }
    bool empty() const { return trees_.empty(); }
    // Number of trees, the exponent of beta in the weighted norms.
    int count() const { return static_cast<int>(trees_.size()); }
    // Total vertex count.
    int size() const { return size_; }
    const std::string& key() const { return key_; }

    Forest concat(const Forest& o) const;
    Forest concat(const Tree& t) const;

    bool operator==(const Forest& o) const { return key_ == o.key_; }
    bool operator!=(const Forest& o) const { return key_ != o.key_; }
    bool operator<(const Forest& o) const { return key_ < o.key_; }

 private:
    std::vector<Tree> trees_;
    int size_ = 0;
    std::string key_;
};

Tree single_vertex(int label = 0);
// Grafts every tree of the forest onto a fresh root carrying `label`.
Tree join(const Forest& children, int label = 0);

// tau! with the usual recursion: leaf! = 1, [t1..tn]! = |tree| * prod ti!.
BigInt tree_factorial(const Tree& t);
// Product of the tree factorials.
BigInt forest_factorial(const Forest& f);

Tree parse_tree(const std::string& text);
Forest parse_forest(const std::string& text);

// All trees with exactly n vertices.  alphabet == 0 enumerates unlabelled
// trees; alphabet == d >= 1 enumerates trees with every vertex labelled in
// 1..d.  Results are sorted by key and deterministic.
std::vector<Tree> enumerate_trees(int n, int alphabet = 0);
// All forests with exactly n vertices (n == 0 gives the empty forest only).
std::vector<Forest> enumerate_forests(int n, int alphabet = 0);

// |T^n| without enumeration, by the rooted-tree counting recurrence
//   n * t(n) = sum_{k=1}^{n-1} ( sum_{d | k} d * t(d) ) * t(n - k+... )
// in its standard Euler-transform form.  Used as an independent oracle for
// enumerate_trees and for the tree-count factors in the decay constants.
BigInt count_trees(int n, int alphabet = 0);
// Trees with at most n vertices (n >= 1); the convention used by the
// factorial-decay constant.
BigInt count_trees_upto(int n, int alphabet = 0);

void validate_label(int label, int alphabet);

}  // namespace branched
