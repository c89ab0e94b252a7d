#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pirc/rewrite.hpp"
#include "pirc/trs.hpp"

namespace pirc {

/// Root replaced by its sharp twin when defined; identity otherwise.
inline Term sharp(const Term& t, const Trs& R) {
    if (t.is_variable() || !R.is_defined(t.symbol())) return t;
    const Symbol& f = t.symbol();
    return Term::app(Symbol::sharp(f.name, f.arity), t.args());
}

inline bool is_sharp_term(const Term& t) {
    if (t.is_variable() || t.symbol().kind != SymbolKind::Sharp) return false;
    for (const Position& p : positions(t)) {
        if (p.is_root()) continue;
        Term sub = subterm_at(t, p);
        if (!sub.is_variable() && sub.symbol().kind != SymbolKind::Plain) return false;
    }
    return true;
}

/// Dependency tuple lhs# -> Com_k(rhs_parts...). Com_0 is the empty
/// part list, not a special constant.
struct DtRule {
    Term lhs;
    std::vector<Term> rhs_parts;

    DtRule(Term l, std::vector<Term> parts) : lhs(std::move(l)), rhs_parts(std::move(parts)) {
        if (!is_sharp_term(lhs)) throw Error("DT lhs is not a sharp term: " + lhs.to_string());
        for (const Term& p : rhs_parts)
            if (!is_sharp_term(p)) throw Error("DT rhs part is not a sharp term: " + p.to_string());
    }

    Term rhs_term() const {
        return Term::app(Symbol::compound(static_cast<int>(rhs_parts.size())), rhs_parts);
    }

    Rule as_rule() const { return Rule(lhs, rhs_term()); }

    bool operator==(const DtRule& o) const { return lhs == o.lhs && rhs_parts == o.rhs_parts; }
    bool operator!=(const DtRule& o) const { return !(*this == o); }

    std::string to_string() const { return lhs.to_string() + " -> " + rhs_term().to_string(); }
};

/// Two DTs equal up to variable renaming and the order of Com
/// arguments (the position order is a free choice).
inline bool equivalent_up_to_com_order(const DtRule& a, const DtRule& b) {
    if (a.rhs_parts.size() != b.rhs_parts.size()) return false;
    std::vector<std::size_t> perm(b.rhs_parts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end());
    do {
        std::map<std::string, std::string> fwd, bwd;
        if (!alpha_equivalent(a.lhs, b.lhs, fwd, bwd)) continue;
        bool ok = true;
        for (std::size_t i = 0; i < perm.size() && ok; ++i)
            ok = alpha_equivalent(a.rhs_parts[i], b.rhs_parts[perm[i]], fwd, bwd);
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

/// DT problem <D, S, R>: dependency tuples, the counted subset (as
/// indices into D), and the base rules.
struct DtProblem {
    std::vector<DtRule> dts;
    std::vector<std::size_t> counted;  // indices into dts, ascending
    Trs base;

    bool is_counted(std::size_t i) const {
        return std::find(counted.begin(), counted.end(), i) != counted.end();
    }
};

namespace detail {
// Def. 3 needs a total order on positions; we use longer paths first
// and descending lexicographic order among equal lengths.
inline bool dt_position_order(const Position& a, const Position& b) {
    if (a.path.size() != b.path.size()) return a.path.size() > b.path.size();
    return a.path > b.path;
}
}  // namespace detail

/// The single DT collecting every defined position of the rhs.
inline DtRule sequential_dt(const Rule& rule, const Trs& R) {
    std::vector<Position> ps = defined_positions(rule.rhs, R);
    std::sort(ps.begin(), ps.end(), detail::dt_position_order);
    std::vector<Term> parts;
    parts.reserve(ps.size());
    for (const Position& p : ps) parts.push_back(sharp(subterm_at(rule.rhs, p), R));
    return DtRule(sharp(rule.lhs, R), std::move(parts));
}

/// Maximal structural dependency chains of t: one chain per defined
/// position with no defined position strictly below it, consisting of
/// that position followed by all its defined prefixes, deepest first.
/// Never empty: the chain set of a defined-symbol-free term is {<>}.
inline std::vector<std::vector<Position>> msdc(const Term& t, const Trs& R) {
    std::vector<Position> dp = defined_positions(t, R);
    std::vector<std::vector<Position>> chains;
    for (const Position& p : dp) {
        bool deepest = true;
        for (const Position& q : dp)
            if (strictly_above(q, p)) {
                deepest = false;
                break;
            }
        if (!deepest) continue;
        std::vector<Position> chain{p};
        for (const Position& q : dp)
            if (strictly_above(p, q)) chain.push_back(q);
        std::sort(chain.begin(), chain.end(),
                  [](const Position& a, const Position& b) { return a.path.size() > b.path.size(); });
        chains.push_back(std::move(chain));
    }
    if (chains.empty()) chains.push_back({});
    std::sort(chains.begin(), chains.end());
    return chains;
}

/// One DT per maximal structural dependency chain, parts ordered along
/// the chain from the deepest position up.
inline std::vector<DtRule> parallel_dts(const Rule& rule, const Trs& R) {
    std::vector<DtRule> out;
    for (const auto& chain : msdc(rule.rhs, R)) {
        std::vector<Term> parts;
        parts.reserve(chain.size());
        for (const Position& p : chain) parts.push_back(sharp(subterm_at(rule.rhs, p), R));
        out.push_back(DtRule(sharp(rule.lhs, R), std::move(parts)));
    }
    return out;
}

/// <PDT(R), PDT(R), R>.
inline DtProblem canonical_parallel_problem(const Trs& R) {
    DtProblem p;
    p.base = R;
    for (const Rule& r : R.rules())
        for (DtRule& dt : parallel_dts(r, R)) p.dts.push_back(std::move(dt));
    p.counted.resize(p.dts.size());
    for (std::size_t i = 0; i < p.counted.size(); ++i) p.counted[i] = i;
    return p;
}

/// True iff every rhs has exactly one maximal chain; then the PDTs
/// collapse to the sequential DTs and parallel evaluation cannot
/// overtake sequential evaluation from basic terms.
inline bool has_no_parallelism(const Trs& R) {
    for (const Rule& r : R.rules())
        if (msdc(r.rhs, R).size() != 1) return false;
    return true;
}

namespace detail {

// Supremum of counted nodes over all chain trees, by longest-tree
// dynamic programming over sharp states. A state revisited along the
// current expansion certifies unbounded trees.
class CplxExplorer {
public:
    CplxExplorer(const DtProblem& p, std::uint64_t fuel) : p_(p), fuel_(fuel) {}

    DerivationHeight run(const Term& t_sharp) {
        Result r = go(t_sharp);
        if (r.omega) return DerivationHeight::omega();
        if (r.exact) return DerivationHeight::finite(r.lower);
        return DerivationHeight::at_least(r.lower);
    }

private:
    struct Result {
        std::uint64_t lower = 0;
        bool exact = true;
        bool omega = false;
    };

    // Normal forms of each argument, combined into candidate instances
    // of DT left-hand sides reachable below the sharp root.
    std::vector<Term> child_candidates(const Term& part) {
        std::vector<std::vector<Term>> arg_nfs;
        bool complete = true;
        for (const Term& a : part.args()) {
            NormalFormSet nfs = normal_forms_innermost(a, p_.base, fuel_);
            complete &= nfs.complete;
            arg_nfs.push_back(std::move(nfs.forms));
        }
        incomplete_ |= !complete;
        std::vector<Term> out;
        std::vector<std::size_t> pick(arg_nfs.size(), 0);
        for (const auto& nfs : arg_nfs)
            if (nfs.empty()) return out;
        for (;;) {
            std::vector<Term> args;
            for (std::size_t i = 0; i < pick.size(); ++i) args.push_back(arg_nfs[i][pick[i]]);
            out.push_back(Term::app(part.symbol(), std::move(args)));
            std::size_t k = pick.size();
            while (k > 0) {
                if (++pick[k - 1] < arg_nfs[k - 1].size()) break;
                pick[k - 1] = 0;
                --k;
            }
            if (k == 0) break;
        }
        sort_unique(out);
        return out;
    }

    Result go(const Term& w) {
        if (auto it = memo_.find(w); it != memo_.end()) {
            if (it->second.is_omega()) return {0, false, true};
            return {it->second.value, true, false};
        }
        if (on_path_.count(w)) return {0, false, true};
        if (fuel_counter_ == 0) return {0, false, false};
        --fuel_counter_;
        on_path_.insert(w);
        Result agg;
        bool any_root = false;
        for (std::size_t i = 0; i < p_.dts.size() && !agg.omega; ++i) {
            const DtRule& dt = p_.dts[i];
            auto nu = match_term(dt.lhs, w);
            if (!nu) continue;
            any_root = true;
            Result node;
            node.lower = p_.is_counted(i) ? 1 : 0;
            for (const Term& part : dt.rhs_parts) {
                Result best;  // omitted child contributes 0
                for (const Term& cand : child_candidates(nu->apply(part))) {
                    bool matches = false;
                    for (const DtRule& d2 : p_.dts)
                        if (match_term(d2.lhs, cand)) {
                            matches = true;
                            break;
                        }
                    if (!matches) continue;
                    Result r = go(cand);
                    if (r.omega) {
                        best.omega = true;
                        break;
                    }
                    best.lower = std::max(best.lower, r.lower);
                    best.exact = best.exact && r.exact;
                }
                if (best.omega) {
                    node.omega = true;
                    break;
                }
                node.lower += best.lower;
                node.exact = node.exact && best.exact;
            }
            if (node.omega) {
                agg.omega = true;
                break;
            }
            agg.lower = std::max(agg.lower, node.lower);
            agg.exact = agg.exact && node.exact;
        }
        on_path_.erase(w);
        if (agg.omega) {
            memo_.emplace(w, DerivationHeight::omega());
            return {0, false, true};
        }
        if (!any_root) agg = Result{0, true, false};
        agg.exact = agg.exact && !incomplete_;
        if (agg.exact) memo_.emplace(w, DerivationHeight::finite(agg.lower));
        return agg;
    }

    const DtProblem& p_;
    std::uint64_t fuel_;
    std::uint64_t fuel_counter_ = fuel_;
    bool incomplete_ = false;
    std::unordered_map<Term, DerivationHeight, TermHash> memo_;
    std::unordered_set<Term, TermHash> on_path_;
};

}  // namespace detail

/// Exact supremum of counted chain-tree sizes for t# when exploration
/// completes in fuel; Omega on a certified infinite expansion; AtLeast
/// when fuel ran out. Arguments of t# must be in normal form wrt the
/// base rules.
inline DerivationHeight cplx_bruteforce(const Term& t_sharp, const DtProblem& p,
                                        std::uint64_t fuel) {
    for (const Term& a : t_sharp.args())
        if (!is_normal_form(a, p.base))
            throw Error("cplx_bruteforce: argument not in normal form: " + a.to_string());
    return detail::CplxExplorer(p, fuel).run(t_sharp);
}

}  // namespace pirc
