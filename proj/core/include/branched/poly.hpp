#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "branched/rational.hpp"

namespace branched {

// Univariate polynomial with rational coefficients, coeffs_[k] on t^k.
class Poly {
 public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        trim();
    }

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    Rational eval(const Rational& t) const {
        Rational acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * t + *it;
        return acc;
    }

    double eval_double(double t) const {
        double acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * t + static_cast<double>(to_ld(*it));
        return acc;
    }

    Poly derivative() const {
        if (coeffs_.size() <= 1) return Poly();
        std::vector<Rational> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            d[k - 1] = coeffs_[k] * Rational(static_cast<int>(k));
        return Poly(std::move(d));
    }

 private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Rational> coeffs_;
};

// Polynomial in the anchor s and the running endpoint u:
//   sum c * s^ps * u^pu.
// Iterated integrals of polynomial paths live here exactly.
class Poly2 {
 public:
    using Key = std::pair<int, int>;  // (power of s, power of u)

    Poly2() = default;
    static Poly2 one() {
        Poly2 p;
        p.terms_[{0, 0}] = Rational(1);
        return p;
    }
    static Poly2 in_u(const Poly& p) {
        Poly2 out;
        for (std::size_t k = 0; k < p.coeffs().size(); ++k)
            if (p.coeffs()[k] != 0)
                out.terms_[{0, static_cast<int>(k)}] = p.coeffs()[k];
        return out;
    }

    const std::map<Key, Rational>& terms() const { return terms_; }

    Poly2 operator*(const Poly2& o) const {
        Poly2 out;
        for (const auto& [ka, ca] : terms_)
            for (const auto& [kb, cb] : o.terms_) {
                Key k{ka.first + kb.first, ka.second + kb.second};
                auto it = out.terms_.find(k);
                if (it == out.terms_.end())
                    out.terms_[k] = ca * cb;
                else {
                    it->second += ca * cb;
                    if (it->second == 0) out.terms_.erase(it);
                }
            }
        return out;
    }

    // Integrate in u from u = s to u = t; the result is again a polynomial in
    // (s, u) with u standing for the new endpoint t:
    //   s^a u^b du  ->  s^a u^(b+1)/(b+1) - s^(a+b+1)/(b+1).
    Poly2 integrate_from_anchor() const {
        Poly2 out;
        for (const auto& [k, c] : terms_) {
            Rational w = c / Rational(k.second + 1);
            out.add({k.first, k.second + 1}, w);
            out.add({k.first + k.second + 1, 0}, -w);
        }
        return out;
    }

    Rational eval(const Rational& s, const Rational& t) const {
        Rational acc(0);
        for (const auto& [k, c] : terms_)
            acc += c * rational_pow(s, k.first) * rational_pow(t, k.second);
        return acc;
    }

 private:
    void add(const Key& k, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(k);
        if (it == terms_.end())
            terms_[k] = c;
        else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    std::map<Key, Rational> terms_;
};

// Named polynomial paths accepted by the command line.
//   identity: x(t) = t                       (one component)
//   parabola: x(t) = (t, t^2)                (two components)
//   cubic:    x(t) = (t, t^3 - t^2)          (two components)
inline std::vector<Poly> named_polynomial_path(const std::string& name) {
    auto t = Poly({Rational(0), Rational(1)});
    if (name == "identity") return {t};
    if (name == "parabola")
        return {t, Poly({Rational(0), Rational(0), Rational(1)})};
    if (name == "cubic")
        return {t, Poly({Rational(0), Rational(0), Rational(-1), Rational(1)})};
    throw std::invalid_argument("unknown polynomial path \"" + name + "\"");
}

}  // namespace branched
