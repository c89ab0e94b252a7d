#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pirc/dt.hpp"
#include "pirc/poly.hpp"

namespace pirc {

namespace detail {
inline void index_variables(const Term& t, std::map<std::string, unsigned>& idx) {
    if (t.is_variable()) {
        idx.emplace(t.var_name(), static_cast<unsigned>(idx.size()));
        return;
    }
    for (const Term& a : t.args()) index_variables(a, idx);
}
}  // namespace detail

inline std::map<std::string, unsigned> variable_indices(const Term& lhs, const Term& rhs) {
    std::map<std::string, unsigned> idx;
    detail::index_variables(lhs, idx);
    detail::index_variables(rhs, idx);
    return idx;
}

/// Finite mapping from symbols to polynomials. Compound symbols always
/// mean the sum of their arguments; explicit entries must agree.
class Interpretation {
    std::map<Symbol, Polynomial> assign_;

public:
    void set(const Symbol& s, Polynomial p) { assign_.insert_or_assign(s, std::move(p)); }

    const std::map<Symbol, Polynomial>& assignment() const { return assign_; }

    static Polynomial com_sum(int k) {
        Polynomial p;
        for (int i = 0; i < k; ++i) p += Polynomial::variable(static_cast<unsigned>(i));
        return p;
    }

    Polynomial lookup(const Symbol& s) const {
        auto it = assign_.find(s);
        if (it != assign_.end()) return it->second;
        if (s.kind == SymbolKind::Compound) return com_sum(s.arity);
        throw Error("interpretation misses symbol " + s.display());
    }

    Polynomial interpret(const Term& t, const std::map<std::string, unsigned>& varidx) const {
        if (t.is_variable()) {
            auto it = varidx.find(t.var_name());
            if (it == varidx.end()) throw Error("unindexed variable " + t.var_name());
            return Polynomial::variable(it->second);
        }
        std::vector<Polynomial> args;
        args.reserve(t.args().size());
        for (const Term& a : t.args()) args.push_back(interpret(a, varidx));
        return lookup(t.symbol()).compose(args);
    }
};

/// Composed polynomial of t over its own variables, indexed by first
/// occurrence.
inline Polynomial interpret_term(const Term& t, const Interpretation& I) {
    std::map<std::string, unsigned> idx;
    detail::index_variables(t, idx);
    return I.interpret(t, idx);
}

inline bool is_cpi_constructor_shape(const Polynomial& p, int arity) {
    for (const auto& [e, c] : p.monomials()) {
        int deg = 0;
        for (unsigned x : e) deg += static_cast<int>(x);
        if (deg > 1) return false;
        if (deg == 1 && c != 1) return false;
        if (static_cast<int>(e.size()) > arity) return false;
    }
    return true;
}

/// Com_n maps to the exact argument sum and every constructor of R to
/// a1*x1 + ... + an*xn + b with each ai in {0,1}.
inline bool check_cpi(const Interpretation& I, const Trs& R) {
    std::set<Symbol> constructors = R.constructor_symbols();
    for (const auto& [s, p] : I.assignment()) {
        if (s.kind == SymbolKind::Compound) {
            if (p != Interpretation::com_sum(s.arity)) return false;
        } else if (constructors.count(s)) {
            if (!is_cpi_constructor_shape(p, s.arity)) return false;
        }
    }
    return true;
}

struct OrientationResult {
    bool weak_ok = false;
    std::vector<std::size_t> strict;  // indices into problem.dts, subset of counted
};

/// Weak orientation of D and R plus the strictly oriented subset of S.
inline OrientationResult orient(const DtProblem& p, const Interpretation& I) {
    if (!check_cpi(I, p.base)) throw Error("orient: interpretation is not a CPI");
    OrientationResult out;
    out.weak_ok = true;
    for (const Rule& r : p.base.rules()) {
        auto idx = variable_indices(r.lhs, r.rhs);
        if (!poly_ge(I.interpret(r.lhs, idx), I.interpret(r.rhs, idx))) out.weak_ok = false;
    }
    for (const DtRule& dt : p.dts) {
        Rule r = dt.as_rule();
        auto idx = variable_indices(r.lhs, r.rhs);
        if (!poly_ge(I.interpret(r.lhs, idx), I.interpret(r.rhs, idx))) out.weak_ok = false;
    }
    for (std::size_t i : p.counted) {
        Rule r = p.dts[i].as_rule();
        auto idx = variable_indices(r.lhs, r.rhs);
        if (poly_gt(I.interpret(r.lhs, idx), I.interpret(r.rhs, idx))) out.strict.push_back(i);
    }
    return out;
}

/// Max total degree over the sharp-symbol polynomials; the k of the
/// O(n^k) contribution.
inline int sharp_degree(const Interpretation& I) {
    int d = 0;
    for (const auto& [s, p] : I.assignment())
        if (s.kind == SymbolKind::Sharp) d = std::max(d, p.degree());
    return d;
}

/// Removes the strictly oriented tuples from the counted set.
inline std::pair<DtProblem, int> reduction_pair_step(const DtProblem& p, const Interpretation& I) {
    OrientationResult r = orient(p, I);
    if (!r.weak_ok || r.strict.empty())
        throw Error("reduction_pair_step: not applicable (needs weak orientation and a "
                    "nonempty strict subset)");
    DtProblem next;
    next.dts = p.dts;
    next.base = p.base;
    for (std::size_t i : p.counted)
        if (std::find(r.strict.begin(), r.strict.end(), i) == r.strict.end())
            next.counted.push_back(i);
    return {std::move(next), sharp_degree(I)};
}

namespace detail {

struct SymbolTemplate {
    Symbol sym;
    std::vector<std::vector<unsigned>> monos;  // slot order: high degree first
    std::vector<std::uint64_t> slot_max;
};

inline std::vector<std::vector<unsigned>> monomials_up_to(int arity, int degree) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur(static_cast<std::size_t>(arity), 0);
    std::function<void(int, int)> go = [&](int pos, int left) {
        if (pos == arity) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[static_cast<std::size_t>(pos)] = static_cast<unsigned>(k);
            go(pos + 1, left - k);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    go(0, degree);
    auto total = [](const std::vector<unsigned>& e) {
        int t = 0;
        for (unsigned x : e) t += static_cast<int>(x);
        return t;
    };
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        if (total(a) != total(b)) return total(a) > total(b);
        return a > b;
    });
    return out;
}

// Backtracking search over per-symbol coefficient templates. Symbols
// are assigned in descending occurrence-frequency order; a constraint
// is checked as soon as its last symbol gets a value. Budget counts
// orientation checks across the whole search.
class InterpSearch {
public:
    InterpSearch(const DtProblem& p, std::uint64_t& budget) : p_(p), budget_(budget) {
        collect_scope();
        build_constraints();
    }

    // Strict orientation of every counted DT required (best possible
    // removal); first hit in enumeration order wins.
    std::optional<Interpretation> full_removal(int degree_cap, int coeff_cap) {
        setup_templates(degree_cap, coeff_cap);
        require_all_strict_ = true;
        best_.reset();
        dfs(0);
        return best_ ? std::make_optional(to_interpretation(*best_)) : std::nullopt;
    }

    // Any candidate weakly orienting everything with a nonempty strict
    // set; prefers more removals, then lower sharp degree, then the
    // enumeration-earliest coefficient vector.
    std::optional<Interpretation> best_partial(int degree_cap, int coeff_cap) {
        setup_templates(degree_cap, coeff_cap);
        require_all_strict_ = false;
        best_.reset();
        best_removed_ = 0;
        best_degree_ = 0;
        dfs(0);
        return best_ ? std::make_optional(to_interpretation(*best_)) : std::nullopt;
    }

private:
    struct Constraint {
        Term lhs;
        Term rhs;
        std::map<std::string, unsigned> varidx;
        std::size_t dt_index = SIZE_MAX;  // SIZE_MAX: base rule (weak only)
        bool counted = false;
        std::size_t last_symbol = 0;
    };

    void collect_symbols(const Term& t, std::map<Symbol, std::size_t>& freq) {
        if (t.is_variable()) return;
        if (t.symbol().kind != SymbolKind::Compound) ++freq[t.symbol()];
        for (const Term& a : t.args()) collect_symbols(a, freq);
    }

    void collect_scope() {
        std::map<Symbol, std::size_t> freq;
        for (const Symbol& s : p_.base.signature()) freq[s];  // ensure presence
        for (const Rule& r : p_.base.rules()) {
            collect_symbols(r.lhs, freq);
            collect_symbols(r.rhs, freq);
        }
        for (const DtRule& dt : p_.dts) {
            collect_symbols(dt.lhs, freq);
            for (const Term& part : dt.rhs_parts) collect_symbols(part, freq);
        }
        std::vector<std::pair<Symbol, std::size_t>> order(freq.begin(), freq.end());
        std::stable_sort(order.begin(), order.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        for (auto& [s, f] : order) {
            symbol_index_[s] = symbols_.size();
            symbols_.push_back(s);
        }
    }

    std::size_t last_symbol_of(const Term& lhs, const Term& rhs) {
        std::size_t last = 0;
        std::function<void(const Term&)> walk = [&](const Term& t) {
            if (t.is_variable()) return;
            if (t.symbol().kind != SymbolKind::Compound)
                last = std::max(last, symbol_index_.at(t.symbol()));
            for (const Term& a : t.args()) walk(a);
        };
        walk(lhs);
        walk(rhs);
        return last;
    }

    void build_constraints() {
        for (const Rule& r : p_.base.rules()) {
            Constraint c{r.lhs, r.rhs, variable_indices(r.lhs, r.rhs), SIZE_MAX, false, 0};
            c.last_symbol = last_symbol_of(r.lhs, r.rhs);
            constraints_.push_back(std::move(c));
        }
        for (std::size_t i = 0; i < p_.dts.size(); ++i) {
            Rule r = p_.dts[i].as_rule();
            Constraint c{r.lhs, r.rhs, variable_indices(r.lhs, r.rhs), i, p_.is_counted(i), 0};
            c.last_symbol = last_symbol_of(r.lhs, r.rhs);
            constraints_.push_back(std::move(c));
        }
        by_last_.assign(symbols_.size(), {});
        for (std::size_t ci = 0; ci < constraints_.size(); ++ci)
            by_last_[constraints_[ci].last_symbol].push_back(ci);
    }

    void setup_templates(int degree_cap, int coeff_cap) {
        templates_.clear();
        std::set<Symbol> constructors = p_.base.constructor_symbols();
        for (const Symbol& s : symbols_) {
            SymbolTemplate t;
            t.sym = s;
            if (constructors.count(s)) {
                // affine CPI shape: argument slots in {0,1}, then b
                for (int i = 0; i < s.arity; ++i) {
                    std::vector<unsigned> e(static_cast<std::size_t>(s.arity), 0);
                    e[static_cast<std::size_t>(i)] = 1;
                    t.monos.push_back(std::move(e));
                    t.slot_max.push_back(1);
                }
                t.monos.push_back(std::vector<unsigned>(static_cast<std::size_t>(s.arity), 0));
                t.slot_max.push_back(static_cast<std::uint64_t>(coeff_cap));
            } else {
                t.monos = monomials_up_to(s.arity, degree_cap);
                t.slot_max.assign(t.monos.size(), static_cast<std::uint64_t>(coeff_cap));
            }
            templates_.push_back(std::move(t));
        }
        coeffs_.assign(templates_.size(), {});
        for (std::size_t i = 0; i < templates_.size(); ++i)
            coeffs_[i].assign(templates_[i].monos.size(), 0);
    }

    Polynomial poly_of(std::size_t sym_i) const {
        Polynomial p;
        const SymbolTemplate& t = templates_[sym_i];
        for (std::size_t m = 0; m < t.monos.size(); ++m)
            if (coeffs_[sym_i][m]) p += Polynomial::monomial(coeffs_[sym_i][m], t.monos[m]);
        return p;
    }

    Polynomial interpret(const Term& t, const std::map<std::string, unsigned>& varidx) const {
        if (t.is_variable()) return Polynomial::variable(varidx.at(t.var_name()));
        std::vector<Polynomial> args;
        args.reserve(t.args().size());
        for (const Term& a : t.args()) args.push_back(interpret(a, varidx));
        if (t.symbol().kind == SymbolKind::Compound) {
            Polynomial sum;
            for (const Polynomial& a : args) sum += a;
            return sum;
        }
        return poly_of(symbol_index_.at(t.symbol())).compose(args);
    }

    // 0: weak fails, 1: weak only, 2: strict
    int check(const Constraint& c) {
        if (budget_ == 0) {
            exhausted_ = true;
            return 0;
        }
        --budget_;
        Polynomial l = interpret(c.lhs, c.varidx);
        Polynomial r = interpret(c.rhs, c.varidx);
        if (!poly_ge(l, r)) return 0;
        return poly_gt(l, r) ? 2 : 1;
    }

    int current_sharp_degree() const {
        int d = 0;
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            if (symbols_[i].kind == SymbolKind::Sharp) d = std::max(d, poly_of(i).degree());
        return d;
    }

    void consider_leaf() {
        std::size_t removed = 0;
        for (const Constraint& c : constraints_) {
            if (!c.counted) continue;
            int v = check(c);
            if (v == 0) return;  // cannot happen after pruning, except budget cut
            if (v == 2) ++removed;
        }
        if (removed == 0) return;
        int degree = current_sharp_degree();
        if (best_ && (removed < best_removed_ ||
                      (removed == best_removed_ && degree >= best_degree_)))
            return;
        best_ = coeffs_;
        best_removed_ = removed;
        best_degree_ = degree;
        if (removed == p_.counted.size() && degree == 0) done_ = true;
    }

    void dfs(std::size_t sym_i) {
        if (exhausted_ || done_) return;
        if (sym_i == symbols_.size()) {
            if (require_all_strict_) {
                best_ = coeffs_;
                done_ = true;
            } else {
                consider_leaf();
            }
            return;
        }
        const SymbolTemplate& t = templates_[sym_i];
        std::vector<std::uint64_t>& c = coeffs_[sym_i];
        std::fill(c.begin(), c.end(), 0);
        for (;;) {
            bool ok = true;
            for (std::size_t ci : by_last_[sym_i]) {
                const Constraint& con = constraints_[ci];
                int v = check(con);
                if (v == 0 || (require_all_strict_ && con.counted && v != 2)) {
                    ok = false;
                    break;
                }
            }
            if (exhausted_) break;
            if (ok) {
                dfs(sym_i + 1);
                if (exhausted_ || done_) break;
            }
            // next coefficient vector, last slot fastest
            std::size_t k = c.size();
            while (k > 0) {
                if (++c[k - 1] <= t.slot_max[k - 1]) break;
                c[k - 1] = 0;
                --k;
            }
            if (k == 0) break;
        }
        std::fill(c.begin(), c.end(), 0);
    }

    Interpretation to_interpretation(const std::vector<std::vector<std::uint64_t>>& sol) const {
        Interpretation I;
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            Polynomial p;
            const SymbolTemplate& t = templates_[i];
            for (std::size_t m = 0; m < t.monos.size(); ++m)
                if (sol[i][m]) p += Polynomial::monomial(sol[i][m], t.monos[m]);
            I.set(symbols_[i], p);
        }
        std::set<int> com_arities;
        for (const DtRule& dt : p_.dts) com_arities.insert(static_cast<int>(dt.rhs_parts.size()));
        for (int k : com_arities) I.set(Symbol::compound(k), Interpretation::com_sum(k));
        return I;
    }

    const DtProblem& p_;
    std::uint64_t& budget_;
    std::vector<Symbol> symbols_;  // frequency order
    std::map<Symbol, std::size_t> symbol_index_;
    std::vector<SymbolTemplate> templates_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::size_t>> by_last_;
    std::vector<std::vector<std::uint64_t>> coeffs_;
    bool require_all_strict_ = false;
    bool exhausted_ = false;
    bool done_ = false;
    std::optional<std::vector<std::vector<std::uint64_t>>> best_;
    std::size_t best_removed_ = 0;
    int best_degree_ = 0;
};

}  // namespace detail

/// Template-instantiation search for a CPI that weakly orients D and R
/// and strictly orients part of S. Tries to remove all of S at the
/// smallest degree and coefficient caps first, then falls back to the
/// best partial removal found within budget.
inline std::optional<Interpretation> search_interpretation(const DtProblem& p, int degree_bound,
                                                           int coeff_bound, std::uint64_t budget) {
    if (degree_bound < 1 || degree_bound > 2)
        throw Error("search_interpretation: degree_bound must be 1 or 2");
    if (coeff_bound < 1) throw Error("search_interpretation: coeff_bound must be >= 1");
    if (p.counted.empty()) return std::nullopt;
    std::uint64_t left = budget;
    for (int d = 1; d <= degree_bound; ++d) {
        for (int c = 1; c <= coeff_bound; ++c) {
            detail::InterpSearch search(p, left);
            if (auto found = search.full_removal(d, c)) return found;
            if (left == 0) return std::nullopt;
        }
    }
    detail::InterpSearch search(p, left);
    return search.best_partial(degree_bound, coeff_bound);
}

struct WitnessStep {
    Interpretation interpretation;
    std::vector<std::size_t> removed;  // indices into the problem's dts
    int degree = 0;
};

struct ComplexityBound {
    enum class Kind { PolyDegree, Unbounded, Unknown };
    Kind kind = Kind::Unknown;
    int degree = 0;
    std::vector<WitnessStep> witness;

    static ComplexityBound poly(int k, std::vector<WitnessStep> w) {
        return {Kind::PolyDegree, k, std::move(w)};
    }
    static ComplexityBound unknown() { return {Kind::Unknown, 0, {}}; }

    std::string to_string() const {
        switch (kind) {
            case Kind::PolyDegree: return "O(n^" + std::to_string(degree) + ")";
            case Kind::Unbounded: return "unbounded";
            default: return "unknown";
        }
    }
};

struct SearchConfig {
    int degree_bound = 2;
    int coeff_bound = 2;
    int escalate_coeff = 3;
    std::uint64_t budget = 1000000;
};

/// Iterates interpretation search and the reduction pair processor
/// until the counted set is empty; the proven bound is the largest
/// per-step degree. Unknown when some step finds no interpretation.
inline ComplexityBound prove_upper_bound(const DtProblem& problem, const SearchConfig& cfg = {}) {
    DtProblem p = problem;
    std::vector<WitnessStep> steps;
    int degree = 0;
    while (!p.counted.empty()) {
        auto found = search_interpretation(p, cfg.degree_bound, cfg.coeff_bound, cfg.budget);
        if (!found && cfg.escalate_coeff > cfg.coeff_bound)
            found = search_interpretation(p, cfg.degree_bound, cfg.escalate_coeff, cfg.budget);
        if (!found) return ComplexityBound::unknown();
        auto [next, k] = reduction_pair_step(p, *found);
        WitnessStep step;
        step.interpretation = *found;
        step.degree = k;
        for (std::size_t i : p.counted)
            if (!next.is_counted(i)) step.removed.push_back(i);
        steps.push_back(std::move(step));
        degree = std::max(degree, k);
        p = std::move(next);
    }
    return ComplexityBound::poly(degree, std::move(steps));
}

}  // namespace pirc
