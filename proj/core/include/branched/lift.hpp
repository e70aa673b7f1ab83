#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "branched/poly.hpp"
#include "branched/trees.hpp"

namespace branched {

// Sampled path: times_[i] strictly increasing, values_[j][i] = component j.
struct PathData {
    std::vector<double> times;
    std::vector<std::vector<double>> values;

    int dimension() const { return static_cast<int>(values.size()); }
    std::size_t samples() const { return times.size(); }
};

// CSV with header "t,x1,...,xd".
PathData load_path_csv(const std::string& file);
void save_path_csv(const PathData& path, const std::string& file);

// Uniform samples of a polynomial path on [0, 1].
PathData sample_polynomial(const std::vector<Poly>& components,
                           std::size_t n_samples);

// Smooth trigonometric preset with seeded phases,
//   x_c(t) = sum_{k=0}^{terms-1} 2^(-k gamma) sin(2^k pi t + phi_{c,k}),
// a deterministic rough-looking test path that is still smooth enough for
// extrapolation in the step size.
PathData weierstrass_preset(double gamma, std::uint64_t seed,
                            std::size_t n_samples, int terms, int dim);

// Exact iterated integrals of a polynomial path: tree -> polynomial in the
// anchor s and the endpoint t.  Labels index components (label 0 and label 1
// both mean the first component).
class PolynomialLift {
 public:
    explicit PolynomialLift(std::vector<Poly> components);

    int dimension() const { return static_cast<int>(components_.size()); }
    const Poly2& tree_poly(const Tree& t) const;
    Rational tree_value(const Tree& t, const Rational& s,
                        const Rational& u) const;
    Rational forest_value(const Forest& f, const Rational& s,
                          const Rational& u) const;

 private:
    std::vector<Poly> components_;
    std::vector<Poly> derivatives_;
    mutable std::map<std::string, Poly2> cache_;
};

// Young lift of a sampled path, anchored at one grid index.  values[key][p]
// is the iterated integral over [times[anchor], out_times[p]] for the tree
// with that canonical key; out_times is the sub-grid on which every dyadic
// coarsening level is available, and the stored numbers are Richardson
// extrapolations across those levels.
struct YoungLift {
    std::vector<double> out_times;
    std::vector<std::size_t> out_indices;
    std::size_t anchor_index = 0;
    std::map<std::string, std::vector<double>> values;
    std::vector<double> level_deltas;  // max diagonal movement per added level
    double achieved_delta = 0.0;
    bool converged = false;
    int levels = 0;
};

// max_degree: lift all labelled trees up to this size (alphabet = path
// dimension; dimension 1 uses unlabelled trees).  levels: number of dyadic
// coarsenings to extrapolate across (the finest level is the full grid).
// Requires anchor_index to be a multiple of the coarsest stride.
YoungLift lift_young(const PathData& path, int max_degree,
                     std::size_t anchor_index, int levels, double tol);

// Increment character over [out index a, out index b] from an anchored table,
// solved degree by degree from the flow identity; tree keys only.
std::map<std::string, double> chen_shift(const YoungLift& lift, int max_degree,
                                         int alphabet, std::size_t a,
                                         std::size_t b);

// Crude Hoelder-norm estimate of a sampled scalar signal: max over a coarse
// all-pairs grid plus all adjacent fine pairs of |x_t - x_s| / |t-s|^gamma.
double holder_norm_estimate(const std::vector<double>& times,
                            const std::vector<double>& xs, double gamma);

}  // namespace branched
