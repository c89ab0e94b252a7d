#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pirc/term.hpp"

namespace pirc {

/// Multivariate polynomial over the naturals: exponent vector (indexed
/// by argument position) -> coefficient, zero coefficients dropped.
class Polynomial {
    std::map<std::vector<unsigned>, std::uint64_t> mono_;

    static std::vector<unsigned> trim(std::vector<unsigned> e) {
        while (!e.empty() && e.back() == 0) e.pop_back();
        return e;
    }

public:
    Polynomial() = default;

    static Polynomial constant(std::uint64_t c) {
        Polynomial p;
        if (c) p.mono_[{}] = c;
        return p;
    }

    static Polynomial variable(unsigned index) {
        Polynomial p;
        std::vector<unsigned> e(index + 1, 0);
        e[index] = 1;
        p.mono_[trim(std::move(e))] = 1;
        return p;
    }

    static Polynomial monomial(std::uint64_t coeff, std::vector<unsigned> exps) {
        Polynomial p;
        if (coeff) p.mono_[trim(std::move(exps))] = coeff;
        return p;
    }

    const std::map<std::vector<unsigned>, std::uint64_t>& monomials() const { return mono_; }
    bool is_zero() const { return mono_.empty(); }

    std::uint64_t coefficient(const std::vector<unsigned>& exps) const {
        auto it = mono_.find(trim(exps));
        return it == mono_.end() ? 0 : it->second;
    }
    std::uint64_t constant_coefficient() const { return coefficient({}); }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : mono_) {
            int t = 0;
            for (unsigned x : e) t += static_cast<int>(x);
            d = std::max(d, t);
        }
        return d;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [e, c] : o.mono_) {
            auto& slot = mono_[e];
            slot += c;
            if (slot == 0) mono_.erase(e);
        }
        return *this;
    }
    Polynomial operator+(const Polynomial& o) const {
        Polynomial r = *this;
        r += o;
        return r;
    }

    Polynomial operator*(const Polynomial& o) const {
        Polynomial r;
        for (const auto& [e1, c1] : mono_) {
            for (const auto& [e2, c2] : o.mono_) {
                std::vector<unsigned> e(std::max(e1.size(), e2.size()), 0);
                for (std::size_t i = 0; i < e1.size(); ++i) e[i] += e1[i];
                for (std::size_t i = 0; i < e2.size(); ++i) e[i] += e2[i];
                r.mono_[trim(std::move(e))] += c1 * c2;
            }
        }
        return r;
    }

    Polynomial scaled(std::uint64_t k) const {
        Polynomial r;
        if (k == 0) return r;
        for (const auto& [e, c] : mono_) r.mono_[e] = c * k;
        return r;
    }

    /// Substitute args[i] for variable i.
    Polynomial compose(const std::vector<Polynomial>& args) const {
        Polynomial r;
        for (const auto& [e, c] : mono_) {
            Polynomial term = Polynomial::constant(c);
            for (std::size_t i = 0; i < e.size(); ++i)
                for (unsigned k = 0; k < e[i]; ++k) {
                    if (i >= args.size()) throw Error("compose: missing argument polynomial");
                    term = term * args[i];
                }
            r += term;
        }
        return r;
    }

    bool operator==(const Polynomial& o) const { return mono_ == o.mono_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    std::string to_string() const {
        if (mono_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [e, c] : mono_) {
            if (!first) s += " + ";
            first = false;
            bool printed = false;
            if (c != 1 || e.empty()) {
                s += std::to_string(c);
                printed = true;
            }
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (printed) s += "*";
                s += "x" + std::to_string(i + 1);
                if (e[i] > 1) s += "^" + std::to_string(e[i]);
                printed = true;
            }
        }
        return s;
    }
};

inline std::uint64_t evaluate(const Polynomial& p, const std::vector<std::uint64_t>& point) {
    std::uint64_t total = 0;
    for (const auto& [e, c] : p.monomials()) {
        std::uint64_t term = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (i >= point.size()) throw Error("evaluate: point too short");
            for (unsigned k = 0; k < e[i]; ++k) term *= point[i];
        }
        total += term;
    }
    return total;
}

/// p >= q by absolute positiveness: every coefficient of p - q is
/// nonnegative. Sound but incomplete for the semantic order.
inline bool poly_ge(const Polynomial& p, const Polynomial& q) {
    for (const auto& [e, c] : q.monomials())
        if (p.coefficient(e) < c) return false;
    return true;
}

/// p > q: additionally the constant coefficient of p - q is >= 1.
inline bool poly_gt(const Polynomial& p, const Polynomial& q) {
    return poly_ge(p, q) && p.constant_coefficient() >= q.constant_coefficient() + 1;
}

}  // namespace pirc
