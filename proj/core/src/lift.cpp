#include "branched/lift.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "branched/hopf.hpp"

namespace branched {

PathData load_path_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open path file " + file);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("empty path file " + file);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 2 || header[0] != "t")
        throw std::invalid_argument("path header must be t,x1,...,xd");
    for (std::size_t j = 1; j < header.size(); ++j)
        if (header[j] != "x" + std::to_string(j))
            throw std::invalid_argument("path header must be t,x1,...,xd");
    int dim = static_cast<int>(header.size()) - 1;

    PathData out;
    out.values.resize(dim);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> nums;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
                nums.push_back(v);
            } catch (const std::exception&) {
                throw std::invalid_argument("bad number \"" + cell +
                                            "\" in row " + std::to_string(row));
            }
        }
        if (nums.size() != header.size())
            throw std::invalid_argument("row " + std::to_string(row) +
                                        " has wrong column count");
        out.times.push_back(nums[0]);
        for (int j = 0; j < dim; ++j) out.values[j].push_back(nums[j + 1]);
    }
    if (out.times.size() < 2)
        throw std::invalid_argument("path needs at least two samples");
    for (std::size_t i = 1; i < out.times.size(); ++i)
        if (!(out.times[i] > out.times[i - 1]))
            throw std::invalid_argument("path times must strictly increase");
    return out;
}

void save_path_csv(const PathData& path, const std::string& file) {
    std::ofstream out(file);
    if (!out) throw std::invalid_argument("cannot write path file " + file);
    out << "t";
    for (int j = 1; j <= path.dimension(); ++j) out << ",x" << j;
    out << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < path.samples(); ++i) {
        out << path.times[i];
        for (int j = 0; j < path.dimension(); ++j)
            out << "," << path.values[j][i];
        out << "\n";
    }
}

PathData sample_polynomial(const std::vector<Poly>& components,
                           std::size_t n_samples) {
    if (components.empty())
        throw std::invalid_argument("path needs at least one component");
    if (n_samples < 2)
        throw std::invalid_argument("path needs at least two samples");
    PathData out;
    out.times.resize(n_samples);
    out.values.assign(components.size(), std::vector<double>(n_samples));
    for (std::size_t i = 0; i < n_samples; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(n_samples - 1);
        out.times[i] = t;
        for (std::size_t j = 0; j < components.size(); ++j)
            out.values[j][i] = components[j].eval_double(t);
    }
    return out;
}

PathData weierstrass_preset(double gamma, std::uint64_t seed,
                            std::size_t n_samples, int terms, int dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (terms < 1) throw std::invalid_argument("need at least one term");
    if (n_samples < 2)
        throw std::invalid_argument("path needs at least two samples");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::vector<std::vector<double>> phases(dim, std::vector<double>(terms));
    for (int c = 0; c < dim; ++c)
        for (int k = 0; k < terms; ++k) phases[c][k] = phase(rng);

    PathData out;
    out.times.resize(n_samples);
    out.values.assign(dim, std::vector<double>(n_samples));
    for (std::size_t i = 0; i < n_samples; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(n_samples - 1);
        out.times[i] = t;
        for (int c = 0; c < dim; ++c) {
            double acc = 0;
            for (int k = 0; k < terms; ++k)
                acc += std::pow(2.0, -gamma * k) *
                       std::sin(std::pow(2.0, k) * M_PI * t + phases[c][k]);
            out.values[c][i] = acc;
        }
    }
    return out;
}

PolynomialLift::PolynomialLift(std::vector<Poly> components)
    : components_(std::move(components)) {
    if (components_.empty())
        throw std::invalid_argument("path needs at least one component");
    for (const Poly& p : components_) derivatives_.push_back(p.derivative());
}

const Poly2& PolynomialLift::tree_poly(const Tree& t) const {
    auto it = cache_.find(t.key());
    if (it != cache_.end()) return it->second;
    int comp = std::max(t.label(), 1) - 1;
    if (comp >= dimension())
        throw std::invalid_argument("tree label " + std::to_string(t.label()) +
                                    " exceeds path dimension " +
                                    std::to_string(dimension()));
    Poly2 integrand = Poly2::one();
    for (const Tree& c : t.children()) integrand = integrand * tree_poly(c);
    integrand = integrand * Poly2::in_u(derivatives_[comp]);
    Poly2 value = integrand.integrate_from_anchor();
    return cache_.emplace(t.key(), std::move(value)).first->second;
}

Rational PolynomialLift::tree_value(const Tree& t, const Rational& s,
                                    const Rational& u) const {
    return tree_poly(t).eval(s, u);
}

Rational PolynomialLift::forest_value(const Forest& f, const Rational& s,
                                      const Rational& u) const {
    Rational acc(1);
    for (const Tree& t : f.trees()) acc *= tree_value(t, s, u);
    return acc;
}

namespace {

// Richardson extrapolation across levels whose step halves each time:
//   T[r][c] = (2^c T[r][c-1] - T[r-1][c-1]) / (2^c - 1).
class RichardsonDouble {
 public:
    void push(double v) {
        std::vector<double> row{v};
        for (std::size_t c = 1; c <= rows_.size(); ++c) {
            double p = std::pow(2.0, static_cast<double>(c));
            row.push_back((p * row[c - 1] - rows_.back()[c - 1]) / (p - 1.0));
        }
        rows_.push_back(std::move(row));
    }
    double diag() const { return rows_.back().back(); }
    std::size_t size() const { return rows_.size(); }
    double diag_delta() const {
        if (rows_.size() < 2) return std::numeric_limits<double>::infinity();
        return std::fabs(rows_.back().back() -
                         rows_[rows_.size() - 2][rows_.size() - 2]);
    }

 private:
    std::vector<std::vector<double>> rows_;
};

}  // namespace

YoungLift lift_young(const PathData& path, int max_degree,
                     std::size_t anchor_index, int levels, double tol) {
    if (max_degree < 1) throw std::invalid_argument("max_degree must be >= 1");
    if (levels < 2) throw std::invalid_argument("need at least two levels");
    if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
    std::size_t n = path.samples();
    std::size_t coarse = std::size_t(1) << (levels - 1);
    if (n < 2 || (n - 1) % coarse != 0)
        throw std::invalid_argument(
            "sample count minus one must be divisible by the coarsest stride");
    if (anchor_index % coarse != 0 || anchor_index >= n)
        throw std::invalid_argument(
            "anchor must sit on the coarsest sub-grid");

    int dim = path.dimension();
    int alphabet = dim == 1 ? 0 : dim;
    std::vector<Tree> trees;
    for (int k = 1; k <= max_degree; ++k) {
        auto tk = enumerate_trees(k, alphabet);
        trees.insert(trees.end(), tk.begin(), tk.end());
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < trees.size(); ++i) index[trees[i].key()] = i;
    std::vector<std::vector<std::size_t>> child_idx(trees.size());
    std::vector<int> comp(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) {
        comp[i] = std::max(trees[i].label(), 1) - 1;
        if (comp[i] >= dim)
            throw std::invalid_argument("tree label exceeds path dimension");
        for (const Tree& c : trees[i].children())
            child_idx[i].push_back(index.at(c.key()));
    }

    YoungLift out;
    out.anchor_index = anchor_index;
    out.levels = levels;
    for (std::size_t m = anchor_index; m < n; m += coarse) {
        out.out_indices.push_back(m);
        out.out_times.push_back(path.times[m]);
    }
    std::size_t n_out = out.out_indices.size();

    // level_values[r][tree][out position]
    std::vector<std::vector<std::vector<double>>> level_values(
        levels, std::vector<std::vector<double>>(
                    trees.size(), std::vector<double>(n_out, 0.0)));
    std::vector<double> cur(trees.size()), nxt(trees.size());
    for (int r = 0; r < levels; ++r) {
        std::size_t stride = coarse >> r;
        std::fill(cur.begin(), cur.end(), 0.0);
        std::size_t out_pos = 0;
        for (std::size_t m = anchor_index;; m += stride) {
            if ((m - anchor_index) % coarse == 0) {
                for (std::size_t i = 0; i < trees.size(); ++i)
                    level_values[r][i][out_pos] = cur[i];
                ++out_pos;
            }
            if (m + stride >= n) break;
            for (std::size_t i = 0; i < trees.size(); ++i) {
                double prod = 1.0;
                for (std::size_t ci : child_idx[i]) prod *= cur[ci];
                nxt[i] = cur[i] + prod * (path.values[comp[i]][m + stride] -
                                          path.values[comp[i]][m]);
            }
            std::swap(cur, nxt);
        }
    }

    out.level_deltas.assign(levels, 0.0);
    for (std::size_t i = 0; i < trees.size(); ++i) {
        std::vector<double> extrapolated(n_out);
        for (std::size_t p = 0; p < n_out; ++p) {
            RichardsonDouble rich;
            for (int r = 0; r < levels; ++r) {
                rich.push(level_values[r][i][p]);
                if (r >= 1)
                    out.level_deltas[r] =
                        std::max(out.level_deltas[r], rich.diag_delta());
            }
            extrapolated[p] = rich.diag();
        }
        out.values[trees[i].key()] = std::move(extrapolated);
    }
    out.level_deltas.erase(out.level_deltas.begin());
    out.achieved_delta = out.level_deltas.back();
    out.converged = out.achieved_delta <= tol;
    return out;
}

std::map<std::string, double> chen_shift(const YoungLift& lift, int max_degree,
                                         int alphabet, std::size_t a,
                                         std::size_t b) {
    if (a > b || b >= lift.out_times.size())
        throw std::invalid_argument("bad output positions for chen_shift");
    std::map<std::string, double> w;  // increment values on trees
    auto forest_w = [&](const Forest& f) {
        double acc = 1.0;
        for (const Tree& t : f.trees()) acc *= w.at(t.key());
        return acc;
    };
    for (int n = 1; n <= max_degree; ++n)
        for (const Tree& tau : enumerate_trees(n, alphabet)) {
            double vb = lift.values.at(tau.key())[b];
            double acc = 0.0;
            for (const CutTerm& term : coproduct_tree(tau)) {
                if (term.trunk.size() == tau.size()) continue;  // the unknown
                double va = 1.0;
                for (const Tree& t : term.pruned.trees())
                    va *= lift.values.at(t.key())[a];
                acc += va * forest_w(term.trunk) * to_ld(term.mult);
            }
            w[tau.key()] = vb - acc;
        }
    return w;
}

double holder_norm_estimate(const std::vector<double>& times,
                            const std::vector<double>& xs, double gamma) {
    if (times.size() != xs.size() || times.size() < 2)
        throw std::invalid_argument("bad signal for holder_norm_estimate");
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        double dt = times[i + 1] - times[i];
        best = std::max(best,
                        std::fabs(xs[i + 1] - xs[i]) / std::pow(dt, gamma));
    }
    std::size_t step = std::max<std::size_t>(1, times.size() / 512);
    for (std::size_t i = 0; i < times.size(); i += step)
        for (std::size_t j = i + step; j < times.size(); j += step) {
            double dt = times[j] - times[i];
            best = std::max(
                best, std::fabs(xs[j] - xs[i]) / std::pow(dt, gamma));
        }
    return best;
}

}  // namespace branched
