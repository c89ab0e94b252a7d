#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pirc {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class SymbolKind { Plain, Sharp, Compound };

/// A function symbol. Sharp symbols are the marked twins of defined
/// symbols and display as `name#`; compound symbols are the call
/// collectors `Com_k` whose arity is k.
struct Symbol {
    std::string name;
    int arity = 0;
    SymbolKind kind = SymbolKind::Plain;

    static Symbol plain(std::string n, int a) { return {std::move(n), a, SymbolKind::Plain}; }
    static Symbol sharp(std::string n, int a) { return {std::move(n), a, SymbolKind::Sharp}; }
    static Symbol compound(int k) { return {"Com", k, SymbolKind::Compound}; }

    /// Printable name; also the concrete-syntax spelling.
    std::string display() const {
        switch (kind) {
            case SymbolKind::Sharp: return name + "#";
            case SymbolKind::Compound: return "Com_" + std::to_string(arity);
            default: return name;
        }
    }

    bool operator==(const Symbol& o) const {
        return kind == o.kind && arity == o.arity && name == o.name;
    }
    bool operator!=(const Symbol& o) const { return !(*this == o); }
    bool operator<(const Symbol& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (name != o.name) return name < o.name;
        return arity < o.arity;
    }
};

inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct SymbolHash {
    std::size_t operator()(const Symbol& s) const {
        std::size_t h = std::hash<std::string>()(s.name);
        h = hash_mix(h, static_cast<std::size_t>(s.arity));
        return hash_mix(h, static_cast<std::size_t>(s.kind));
    }
};

/// Immutable first-order term: a variable or a symbol applied to
/// exactly arity-many arguments. Copies are cheap (shared nodes), but
/// equality and size are purely structural; there is no hash-consing.
class Term {
    struct Node {
        bool is_var;
        std::string var;
        Symbol sym;
        std::vector<Term> args;
        std::size_t hash;
    };
    std::shared_ptr<const Node> n_;

    explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

public:
    static Term var(std::string name) {
        auto n = std::make_shared<Node>();
        n->is_var = true;
        n->var = std::move(name);
        n->hash = hash_mix(0x517cc1b727220a95ULL, std::hash<std::string>()(n->var));
        return Term(std::move(n));
    }

    static Term app(Symbol sym, std::vector<Term> args = {}) {
        if (static_cast<int>(args.size()) != sym.arity)
            throw Error("arity mismatch constructing " + sym.display() + ": got " +
                        std::to_string(args.size()) + ", expected " + std::to_string(sym.arity));
        auto n = std::make_shared<Node>();
        n->is_var = false;
        n->sym = std::move(sym);
        n->args = std::move(args);
        std::size_t h = SymbolHash()(n->sym);
        for (const Term& a : n->args) h = hash_mix(h, a.hash());
        n->hash = h;
        return Term(std::move(n));
    }

    bool is_variable() const { return n_->is_var; }
    const std::string& var_name() const {
        if (!n_->is_var) throw Error("var_name on application");
        return n_->var;
    }
    const Symbol& symbol() const {
        if (n_->is_var) throw Error("symbol on variable");
        return n_->sym;
    }
    const std::vector<Term>& args() const {
        static const std::vector<Term> none;
        return n_->is_var ? none : n_->args;
    }

    std::size_t hash() const { return n_->hash; }

    bool operator==(const Term& o) const {
        if (n_ == o.n_) return true;
        if (n_->hash != o.n_->hash) return false;
        if (n_->is_var != o.n_->is_var) return false;
        if (n_->is_var) return n_->var == o.n_->var;
        if (n_->sym != o.n_->sym) return false;
        for (std::size_t i = 0; i < n_->args.size(); ++i)
            if (!(n_->args[i] == o.n_->args[i])) return false;
        return true;
    }
    bool operator!=(const Term& o) const { return !(*this == o); }

    std::string to_string() const {
        if (n_->is_var) return n_->var;
        std::string s = n_->sym.display();
        if (n_->args.empty()) return s;
        s += "(";
        for (std::size_t i = 0; i < n_->args.size(); ++i) {
            if (i) s += ",";
            s += n_->args[i].to_string();
        }
        s += ")";
        return s;
    }

    // Total order for deterministic containers; not the prefix order.
    bool operator<(const Term& o) const {
        if (n_->is_var != o.n_->is_var) return n_->is_var;
        if (n_->is_var) return n_->var < o.n_->var;
        if (n_->sym != o.n_->sym) return n_->sym < o.n_->sym;
        for (std::size_t i = 0; i < n_->args.size(); ++i) {
            if (n_->args[i] < o.n_->args[i]) return true;
            if (o.n_->args[i] < n_->args[i]) return false;
        }
        return false;
    }
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Path from the root; 1-indexed, empty = root position.
struct Position {
    std::vector<int> path;

    Position() = default;
    Position(std::initializer_list<int> p) : path(p) {}
    explicit Position(std::vector<int> p) : path(std::move(p)) {}

    bool is_root() const { return path.empty(); }
    std::size_t depth() const { return path.size(); }

    Position child(int i) const {
        Position p = *this;
        p.path.push_back(i);
        return p;
    }

    bool operator==(const Position& o) const { return path == o.path; }
    bool operator!=(const Position& o) const { return path != o.path; }
    bool operator<(const Position& o) const { return path < o.path; }

    std::string to_string() const {
        if (path.empty()) return "eps";
        std::string s;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i) s += ".";
            s += std::to_string(path[i]);
        }
        return s;
    }
};

inline std::size_t term_size(const Term& t) {
    if (t.is_variable()) return 1;
    std::size_t s = 1;
    for (const Term& a : t.args()) s += term_size(a);
    return s;
}

inline void collect_positions(const Term& t, Position here, std::vector<Position>& out) {
    out.push_back(here);
    const auto& args = t.args();
    for (std::size_t i = 0; i < args.size(); ++i)
        collect_positions(args[i], here.child(static_cast<int>(i) + 1), out);
}

inline std::vector<Position> positions(const Term& t) {
    std::vector<Position> out;
    collect_positions(t, Position{}, out);
    return out;
}

inline Term subterm_at(const Term& t, const Position& pi) {
    const Term* cur = &t;
    for (int i : pi.path) {
        if (cur->is_variable() || i < 1 || i > static_cast<int>(cur->args().size()))
            throw Error("invalid position " + pi.to_string() + " in " + t.to_string());
        cur = &cur->args()[static_cast<std::size_t>(i) - 1];
    }
    return *cur;
}

inline Term replace_at(const Term& t, const Position& pi, const Term& s, std::size_t from = 0) {
    if (from == pi.path.size()) return s;
    int i = pi.path[from];
    if (t.is_variable() || i < 1 || i > static_cast<int>(t.args().size()))
        throw Error("invalid position " + pi.to_string() + " in " + t.to_string());
    std::vector<Term> args = t.args();
    args[static_cast<std::size_t>(i) - 1] =
        replace_at(args[static_cast<std::size_t>(i) - 1], pi, s, from + 1);
    return Term::app(t.symbol(), std::move(args));
}

/// tau > pi in the strict prefix order: pi is a strict prefix of tau.
inline bool strictly_above(const Position& tau, const Position& pi) {
    if (pi.path.size() >= tau.path.size()) return false;
    return std::equal(pi.path.begin(), pi.path.end(), tau.path.begin());
}

inline bool parallel_positions(const Position& a, const Position& b) {
    return !(a == b) && !strictly_above(a, b) && !strictly_above(b, a);
}

inline void collect_variables(const Term& t, std::set<std::string>& out) {
    if (t.is_variable()) {
        out.insert(t.var_name());
        return;
    }
    for (const Term& a : t.args()) collect_variables(a, out);
}

inline std::set<std::string> variables_of(const Term& t) {
    std::set<std::string> out;
    collect_variables(t, out);
    return out;
}

/// Finite mapping from variable names to terms; identity elsewhere.
class Substitution {
    std::map<std::string, Term> bind_;

public:
    Substitution() = default;
    explicit Substitution(std::map<std::string, Term> b) : bind_(std::move(b)) {}

    bool empty() const { return bind_.empty(); }
    std::size_t size() const { return bind_.size(); }
    const std::map<std::string, Term>& bindings() const { return bind_; }

    const Term* lookup(const std::string& v) const {
        auto it = bind_.find(v);
        return it == bind_.end() ? nullptr : &it->second;
    }

    void bind(const std::string& v, Term t) { bind_.insert_or_assign(v, std::move(t)); }

    Term apply(const Term& t) const {
        if (t.is_variable()) {
            const Term* b = lookup(t.var_name());
            return b ? *b : t;
        }
        if (bind_.empty()) return t;
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const Term& a : t.args()) args.push_back(apply(a));
        return Term::app(t.symbol(), std::move(args));
    }

    bool operator==(const Substitution& o) const { return bind_ == o.bind_; }
};

inline Term apply_substitution(const Substitution& sigma, const Term& t) {
    return sigma.apply(t);
}

namespace detail {
inline bool match_into(const Term& pattern, const Term& subject, Substitution& sigma) {
    if (pattern.is_variable()) {
        if (const Term* bound = sigma.lookup(pattern.var_name())) return *bound == subject;
        sigma.bind(pattern.var_name(), subject);
        return true;
    }
    if (subject.is_variable() || pattern.symbol() != subject.symbol()) return false;
    for (std::size_t i = 0; i < pattern.args().size(); ++i)
        if (!match_into(pattern.args()[i], subject.args()[i], sigma)) return false;
    return true;
}

inline bool occurs(const std::string& v, const Term& t) {
    if (t.is_variable()) return t.var_name() == v;
    for (const Term& a : t.args())
        if (occurs(v, a)) return true;
    return false;
}

inline bool unify_into(const Term& s, const Term& t, Substitution& sigma) {
    Term ls = sigma.apply(s);
    Term lt = sigma.apply(t);
    if (ls == lt) return true;
    if (ls.is_variable()) {
        if (occurs(ls.var_name(), lt)) return false;
        Substitution single;
        single.bind(ls.var_name(), lt);
        std::map<std::string, Term> updated;
        for (const auto& [v, b] : sigma.bindings()) updated.insert({v, single.apply(b)});
        sigma = Substitution(std::move(updated));
        sigma.bind(ls.var_name(), lt);
        return true;
    }
    if (lt.is_variable()) return unify_into(lt, ls, sigma);
    if (ls.symbol() != lt.symbol()) return false;
    for (std::size_t i = 0; i < ls.args().size(); ++i)
        if (!unify_into(ls.args()[i], lt.args()[i], sigma)) return false;
    return true;
}
}  // namespace detail

/// Matcher sigma with pattern·sigma = subject, if any. Domain is a
/// subset of the pattern's variables.
inline std::optional<Substitution> match_term(const Term& pattern, const Term& subject) {
    Substitution sigma;
    if (detail::match_into(pattern, subject, sigma)) return sigma;
    return std::nullopt;
}

/// Most general unifier with occurs check.
inline std::optional<Substitution> unify(const Term& s, const Term& t) {
    Substitution sigma;
    if (detail::unify_into(s, t, sigma)) return sigma;
    return std::nullopt;
}

/// Structural equality up to a consistent renaming of variables.
inline bool alpha_equivalent(const Term& a, const Term& b,
                             std::map<std::string, std::string>& fwd,
                             std::map<std::string, std::string>& bwd) {
    if (a.is_variable() != b.is_variable()) return false;
    if (a.is_variable()) {
        auto f = fwd.find(a.var_name());
        auto g = bwd.find(b.var_name());
        if (f == fwd.end() && g == bwd.end()) {
            fwd.emplace(a.var_name(), b.var_name());
            bwd.emplace(b.var_name(), a.var_name());
            return true;
        }
        return f != fwd.end() && g != bwd.end() && f->second == b.var_name() &&
               g->second == a.var_name();
    }
    if (a.symbol() != b.symbol()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!alpha_equivalent(a.args()[i], b.args()[i], fwd, bwd)) return false;
    return true;
}

inline bool alpha_equivalent(const Term& a, const Term& b) {
    std::map<std::string, std::string> fwd, bwd;
    return alpha_equivalent(a, b, fwd, bwd);
}

}  // namespace pirc
