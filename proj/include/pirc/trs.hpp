#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pirc/term.hpp"

namespace pirc {

/// Rewrite rule lhs -> rhs. The lhs is never a variable and the rhs
/// introduces no new variables.
struct Rule {
    Term lhs;
    Term rhs;

    Rule(Term l, Term r) : lhs(std::move(l)), rhs(std::move(r)) {
        if (lhs.is_variable()) throw Error("rule lhs is a variable: " + lhs.to_string());
        auto lv = variables_of(lhs);
        for (const auto& v : variables_of(rhs))
            if (!lv.count(v))
                throw Error("rule rhs introduces variable " + v + ": " + rhs.to_string());
    }

    bool operator==(const Rule& o) const { return lhs == o.lhs && rhs == o.rhs; }
    bool operator!=(const Rule& o) const { return !(*this == o); }

    std::string to_string() const { return lhs.to_string() + " -> " + rhs.to_string(); }
};

inline bool alpha_equivalent(const Rule& a, const Rule& b) {
    std::map<std::string, std::string> fwd, bwd;
    return alpha_equivalent(a.lhs, b.lhs, fwd, bwd) && alpha_equivalent(a.rhs, b.rhs, fwd, bwd);
}

/// Same rule with fresh variable names, disjoint from `avoid`.
inline Rule rename_apart(const Rule& rule, const std::set<std::string>& avoid) {
    auto vars = variables_of(rule.lhs);
    Substitution ren;
    std::set<std::string> taken = avoid;
    int counter = 0;
    for (const auto& v : vars) {
        std::string fresh;
        do {
            fresh = v + "_" + std::to_string(counter++);
        } while (taken.count(fresh) || vars.count(fresh));
        taken.insert(fresh);
        ren.bind(v, Term::var(fresh));
    }
    return Rule(ren.apply(rule.lhs), ren.apply(rule.rhs));
}

/// A term rewrite system: rules in input order plus the signature they
/// span (first-occurrence order, possibly extended by declared extras).
class Trs {
    std::vector<Rule> rules_;
    std::vector<Symbol> signature_;
    std::set<Symbol> defined_;

    void add_symbols(const Term& t) {
        if (t.is_variable()) return;
        bool seen = false;
        for (const Symbol& s : signature_) {
            // Com_k symbols are identified by arity; everything else
            // must use one arity consistently.
            if (s.name != t.symbol().name || s.kind != t.symbol().kind) continue;
            if (s.kind == SymbolKind::Compound) {
                if (s.arity == t.symbol().arity) {
                    seen = true;
                    break;
                }
                continue;
            }
            if (s.arity != t.symbol().arity)
                throw Error("symbol " + s.display() + " used with arities " +
                            std::to_string(s.arity) + " and " + std::to_string(t.symbol().arity));
            seen = true;
            break;
        }
        if (!seen) signature_.push_back(t.symbol());
        for (const Term& a : t.args()) add_symbols(a);
    }

public:
    Trs() = default;
    explicit Trs(std::vector<Rule> rules, std::vector<Symbol> extra_constructors = {})
        : rules_(std::move(rules)) {
        for (const Rule& r : rules_) {
            add_symbols(r.lhs);
            add_symbols(r.rhs);
        }
        for (const Symbol& s : extra_constructors) add_symbols(Term::app(s, dummy_args(s)));
        for (const Rule& r : rules_) defined_.insert(r.lhs.symbol());
    }

    static std::vector<Term> dummy_args(const Symbol& s) {
        std::vector<Term> args;
        for (int i = 0; i < s.arity; ++i) args.push_back(Term::var("_" + std::to_string(i)));
        return args;
    }

    const std::vector<Rule>& rules() const { return rules_; }
    const std::vector<Symbol>& signature() const { return signature_; }
    bool empty() const { return rules_.empty(); }

    bool is_defined(const Symbol& s) const { return defined_.count(s) > 0; }

    std::set<Symbol> defined_symbols() const { return defined_; }

    std::set<Symbol> constructor_symbols() const {
        std::set<Symbol> out;
        for (const Symbol& s : signature_)
            if (!defined_.count(s)) out.insert(s);
        return out;
    }

    /// Signature-order index; symbols not in the signature go last.
    std::size_t symbol_rank(const Symbol& s) const {
        for (std::size_t i = 0; i < signature_.size(); ++i)
            if (signature_[i] == s) return i;
        return signature_.size();
    }

    std::optional<Symbol> find_symbol(const std::string& display_name) const {
        for (const Symbol& s : signature_)
            if (s.display() == display_name) return s;
        return std::nullopt;
    }

    std::set<std::string> all_variable_names() const {
        std::set<std::string> out;
        for (const Rule& r : rules_)
            for (const auto& v : variables_of(r.lhs)) out.insert(v);
        return out;
    }
};

inline std::set<Symbol> defined_symbols(const Trs& R) { return R.defined_symbols(); }

/// Positions of t whose subterm has a defined root.
inline std::vector<Position> defined_positions(const Term& t, const Trs& R) {
    std::vector<Position> out;
    for (const Position& p : positions(t)) {
        Term sub = subterm_at(t, p);
        if (!sub.is_variable() && R.is_defined(sub.symbol())) out.push_back(p);
    }
    return out;
}

/// Defined root applied to constructor terms (variables allowed).
inline bool is_constructor_term(const Term& t, const Trs& R) {
    if (t.is_variable()) return true;
    if (R.is_defined(t.symbol())) return false;
    for (const Term& a : t.args())
        if (!is_constructor_term(a, R)) return false;
    return true;
}

inline bool is_basic(const Term& t, const Trs& R) {
    if (t.is_variable() || !R.is_defined(t.symbol())) return false;
    for (const Term& a : t.args())
        if (!is_constructor_term(a, R)) return false;
    return true;
}

/// Counted rules R1 next to free rules R2 over the shared signature.
struct RelativeTrs {
    Trs counted;
    Trs free;

    Trs combined() const {
        std::vector<Rule> rules = counted.rules();
        for (const Rule& r : free.rules()) rules.push_back(r);
        std::vector<Symbol> extras;
        for (const Symbol& s : counted.signature()) extras.push_back(s);
        for (const Symbol& s : free.signature()) extras.push_back(s);
        return Trs(std::move(rules), std::move(extras));
    }
};

struct GroundBasicEnumeration {
    std::vector<Term> terms;
    bool truncated = false;
};

namespace detail {
// Ground constructor terms of each exact size, in signature-then-args
// lexicographic order per size.
inline const std::vector<std::vector<Term>>& constructor_terms_by_size(
    std::vector<std::vector<Term>>& table, const std::vector<Symbol>& constructors,
    std::size_t max_size) {
    while (table.size() <= max_size) {
        std::size_t sz = table.size();
        std::vector<Term> level;
        if (sz >= 1) {
            for (const Symbol& c : constructors) {
                if (c.arity == 0) {
                    if (sz == 1) level.push_back(Term::app(c));
                    continue;
                }
                if (sz < static_cast<std::size_t>(c.arity) + 1) continue;
                // distribute sz-1 over arity arguments, each >= 1
                std::vector<Term> acc;
                std::function<void(int, std::size_t, std::vector<Term>&)> go =
                    [&](int argi, std::size_t left, std::vector<Term>& cur) {
                        int remaining = c.arity - argi;
                        if (remaining == 0) {
                            if (left == 0) level.push_back(Term::app(c, cur));
                            return;
                        }
                        for (std::size_t k = 1; k + static_cast<std::size_t>(remaining) - 1 <= left;
                             ++k) {
                            for (const Term& t : table[k]) {
                                cur.push_back(t);
                                go(argi + 1, left - k, cur);
                                cur.pop_back();
                            }
                        }
                    };
                go(0, sz - 1, acc);
            }
        }
        table.push_back(std::move(level));
    }
    return table;
}
}  // namespace detail

/// All ground basic terms of size <= max_size, in size order and then
/// in signature-lexicographic order, cut off at cap.
inline GroundBasicEnumeration enumerate_ground_basic(const Trs& R, std::size_t max_size,
                                                     std::size_t cap) {
    if (cap == 0) throw Error("enumerate_ground_basic: cap must be positive");
    GroundBasicEnumeration out;
    std::vector<Symbol> constructors;
    for (const Symbol& s : R.signature())
        if (!R.is_defined(s)) constructors.push_back(s);
    std::vector<Symbol> defined;
    for (const Symbol& s : R.signature())
        if (R.is_defined(s)) defined.push_back(s);

    std::vector<std::vector<Term>> table;
    detail::constructor_terms_by_size(table, constructors, max_size);

    for (std::size_t sz = 1; sz <= max_size; ++sz) {
        for (const Symbol& f : defined) {
            if (sz < static_cast<std::size_t>(f.arity) + 1) continue;
            if (f.arity == 0) {
                if (sz == 1) {
                    if (out.terms.size() >= cap) {
                        out.truncated = true;
                        return out;
                    }
                    out.terms.push_back(Term::app(f));
                }
                continue;
            }
            std::vector<Term> cur;
            bool full = false;
            std::function<void(int, std::size_t)> go = [&](int argi, std::size_t left) {
                if (full) return;
                int remaining = f.arity - argi;
                if (remaining == 0) {
                    if (left == 0) {
                        if (out.terms.size() >= cap) {
                            out.truncated = true;
                            full = true;
                            return;
                        }
                        out.terms.push_back(Term::app(f, cur));
                    }
                    return;
                }
                for (std::size_t k = 1; k + static_cast<std::size_t>(remaining) - 1 <= left; ++k) {
                    for (const Term& t : table[k]) {
                        cur.push_back(t);
                        go(argi + 1, left - k);
                        cur.pop_back();
                        if (full) return;
                    }
                }
            };
            go(0, sz - 1);
            if (full) return out;
        }
    }
    return out;
}

}  // namespace pirc
