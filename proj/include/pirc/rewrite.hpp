#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pirc/confluence.hpp"
#include "pirc/trs.hpp"

namespace pirc {

/// Length of a longest reduction sequence. Omega carries a certificate
/// (a term was revisited along one path); AtLeast reports the largest
/// witnessed count when fuel ran out before the graph was exhausted.
struct DerivationHeight {
    enum class Kind { Finite, Omega, AtLeast };
    Kind kind = Kind::Finite;
    std::uint64_t value = 0;

    static DerivationHeight finite(std::uint64_t n) { return {Kind::Finite, n}; }
    static DerivationHeight omega() { return {Kind::Omega, 0}; }
    static DerivationHeight at_least(std::uint64_t n) { return {Kind::AtLeast, n}; }

    bool is_finite() const { return kind == Kind::Finite; }
    bool is_omega() const { return kind == Kind::Omega; }
    bool is_exact() const { return kind != Kind::AtLeast; }

    bool operator==(const DerivationHeight& o) const {
        if (kind != o.kind) return false;
        return kind == Kind::Omega || value == o.value;
    }
    bool operator!=(const DerivationHeight& o) const { return !(*this == o); }

    DerivationHeight sup(const DerivationHeight& o) const {
        if (is_omega() || o.is_omega()) return omega();
        if (kind == Kind::AtLeast || o.kind == Kind::AtLeast)
            return at_least(std::max(value, o.value));
        return finite(std::max(value, o.value));
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::Omega: return "omega";
            case Kind::AtLeast: return ">=" + std::to_string(value);
            default: return std::to_string(value);
        }
    }
};

struct Strategy {
    enum class Kind { Innermost, ParallelInnermost, RelativeInnermost };
    Kind kind = Kind::Innermost;
    std::shared_ptr<const RelativeTrs> relative;  // RelativeInnermost only

    static Strategy innermost() { return {Kind::Innermost, nullptr}; }
    static Strategy parallel_innermost() { return {Kind::ParallelInnermost, nullptr}; }
    static Strategy relative_innermost(RelativeTrs rel) {
        return {Kind::RelativeInnermost, std::make_shared<RelativeTrs>(std::move(rel))};
    }
};

inline bool is_redex(const Term& t, const Trs& R) {
    if (t.is_variable()) return false;
    for (const Rule& r : R.rules())
        if (match_term(r.lhs, t)) return true;
    return false;
}

namespace detail {
inline bool scan_innermost(const Term& t, const Trs& R, const Position& here,
                           std::vector<Position>& out) {
    bool below = false;
    const auto& args = t.args();
    for (std::size_t i = 0; i < args.size(); ++i)
        below |= scan_innermost(args[i], R, here.child(static_cast<int>(i) + 1), out);
    if (below) return true;
    if (is_redex(t, R)) {
        out.push_back(here);
        return true;
    }
    return false;
}
}  // namespace detail

/// Positions of redexes none of whose proper subterms are redexes.
inline std::vector<Position> innermost_redexes(const Term& t, const Trs& R) {
    std::vector<Position> out;
    detail::scan_innermost(t, R, Position{}, out);
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_normal_form(const Term& t, const Trs& R) {
    return innermost_redexes(t, R).empty();
}

namespace detail {
inline std::vector<Term> contracta(const Term& redex, const Trs& R) {
    std::vector<Term> out;
    for (const Rule& r : R.rules())
        if (auto sigma = match_term(r.lhs, redex)) out.push_back(sigma->apply(r.rhs));
    return out;
}

inline void sort_unique(std::vector<Term>& ts) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}
}  // namespace detail

/// One innermost step: any innermost redex, any matching rule.
inline std::vector<Term> innermost_successors(const Term& t, const Trs& R) {
    std::vector<Term> out;
    for (const Position& p : innermost_redexes(t, R))
        for (const Term& c : detail::contracta(subterm_at(t, p), R))
            out.push_back(replace_at(t, p, c));
    detail::sort_unique(out);
    return out;
}

/// One parallel-innermost step: every innermost redex is rewritten
/// simultaneously; rule choice per redex is independent, so overlapping
/// systems yield several successors.
inline std::vector<Term> parallel_innermost_successors(const Term& t, const Trs& R) {
    std::vector<Position> ps = innermost_redexes(t, R);
    if (ps.empty()) return {};
    std::vector<std::vector<Term>> choices;
    for (const Position& p : ps) choices.push_back(detail::contracta(subterm_at(t, p), R));
    std::vector<Term> out;
    std::vector<std::size_t> pick(ps.size(), 0);
    for (;;) {
        Term cur = t;
        for (std::size_t i = 0; i < ps.size(); ++i) cur = replace_at(cur, ps[i], choices[i][pick[i]]);
        out.push_back(cur);
        std::size_t k = ps.size();
        while (k > 0) {
            if (++pick[k - 1] < choices[k - 1].size()) break;
            pick[k - 1] = 0;
            --k;
        }
        if (k == 0) break;
    }
    detail::sort_unique(out);
    return out;
}

namespace detail {
// Positions where a rule from `sub` applies and no rule of `all` applies
// strictly below: the redex's proper subterms are normal wrt `all`.
inline std::vector<Position> innermost_positions_of(const Term& t, const Trs& sub,
                                                    const Trs& all) {
    std::vector<Position> out;
    for (const Position& p : innermost_redexes(t, all)) {
        Term r = subterm_at(t, p);
        if (is_redex(r, sub)) out.push_back(p);
    }
    return out;
}

inline std::vector<Term> step_with(const Term& t, const Trs& sub, const Trs& all) {
    std::vector<Term> out;
    for (const Position& p : innermost_positions_of(t, sub, all))
        for (const Term& c : contracta(subterm_at(t, p), sub)) out.push_back(replace_at(t, p, c));
    sort_unique(out);
    return out;
}

// All terms reachable by free steps, t included. Throws if the closure
// exceeds the cap (non-terminating free part at desk scale).
inline std::vector<Term> free_closure(const Term& t, const RelativeTrs& rel, const Trs& all,
                                      std::size_t cap) {
    std::vector<Term> queue{t};
    std::unordered_set<Term, TermHash> seen{t};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (const Term& s : step_with(queue[i], rel.free, all)) {
            if (seen.insert(s).second) {
                if (seen.size() > cap) throw Error("free closure exceeded " + std::to_string(cap));
                queue.push_back(s);
            }
        }
    }
    return queue;
}
}  // namespace detail

/// One step of the relative innermost relation: free steps, one counted
/// step, free steps, every redex innermost wrt the union. Each successor
/// counts exactly one toward derivation height.
inline std::vector<std::pair<Term, std::uint64_t>> relative_innermost_successors(
    const Term& t, const RelativeTrs& rel, std::size_t closure_cap = 100000) {
    Trs all = rel.combined();
    std::vector<Term> mids;
    for (const Term& u : detail::free_closure(t, rel, all, closure_cap))
        for (const Term& v : detail::step_with(u, rel.counted, all)) mids.push_back(v);
    detail::sort_unique(mids);
    std::vector<Term> ends;
    for (const Term& v : mids)
        for (const Term& w : detail::free_closure(v, rel, all, closure_cap)) ends.push_back(w);
    detail::sort_unique(ends);
    std::vector<std::pair<Term, std::uint64_t>> out;
    out.reserve(ends.size());
    for (Term& w : ends) out.emplace_back(std::move(w), 1);
    return out;
}

namespace detail {

// Longest-path search over the reduction graph. Memoised on terms; a
// term revisited along the current path certifies an infinite sequence.
// Fuel counts explored states; running out degrades results to AtLeast.
class DhExplorer {
public:
    DhExplorer(std::function<std::vector<Term>(const Term&)> succ, std::uint64_t fuel,
               std::size_t depth_limit = 20000)
        : succ_(std::move(succ)), fuel_(fuel), depth_limit_(depth_limit) {}

    DerivationHeight run(const Term& t) {
        Result r = go(t, 0);
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

    Result go(const Term& t, std::size_t depth) {
        if (auto it = memo_.find(t); it != memo_.end()) {
            const DerivationHeight& h = it->second;
            if (h.is_omega()) return {0, false, true};
            return {h.value, true, false};
        }
        if (on_path_.count(t)) return {0, false, true};
        if (fuel_ == 0 || depth >= depth_limit_) return {0, false, false};
        --fuel_;
        std::vector<Term> succs = succ_(t);
        if (succs.empty()) {
            memo_.emplace(t, DerivationHeight::finite(0));
            return {0, true, false};
        }
        on_path_.insert(t);
        Result agg;
        for (const Term& s : succs) {
            Result r = go(s, depth + 1);
            if (r.omega) {
                agg.omega = true;
                break;
            }
            agg.lower = std::max(agg.lower, r.lower + 1);
            agg.exact = agg.exact && r.exact;
        }
        on_path_.erase(t);
        if (agg.omega) {
            memo_.emplace(t, DerivationHeight::omega());
            return {0, false, true};
        }
        if (agg.exact) memo_.emplace(t, DerivationHeight::finite(agg.lower));
        return agg;
    }

    std::function<std::vector<Term>(const Term&)> succ_;
    std::uint64_t fuel_;
    std::size_t depth_limit_;
    std::unordered_map<Term, DerivationHeight, TermHash> memo_;
    std::unordered_set<Term, TermHash> on_path_;
};

// Exact innermost evaluation for non-overlapping systems: each redex
// has a unique contractum, so every maximal innermost sequence from a
// term has the same length and we can sum costs over the call tree.
class FastInnermost {
public:
    FastInnermost(const Trs& R, std::uint64_t fuel) : R_(R), fuel_(fuel) {}

    enum class St { Ok, Omega, Fuel };

    St eval(const Term& t, Term& nf, std::uint64_t& steps) {
        if (auto it = memo_.find(t); it != memo_.end()) {
            nf = it->second.first;
            steps = it->second.second;
            witnessed_ += steps;
            return St::Ok;
        }
        if (fuel_ == 0) return St::Fuel;
        --fuel_;
        if (t.is_variable()) {
            nf = t;
            steps = 0;
            return St::Ok;
        }
        std::uint64_t arg_steps = 0;
        std::vector<Term> nargs;
        nargs.reserve(t.args().size());
        for (const Term& a : t.args()) {
            Term an = a;
            std::uint64_t k = 0;
            St st = eval(a, an, k);
            if (st != St::Ok) return st;
            arg_steps += k;
            nargs.push_back(std::move(an));
        }
        Term s = Term::app(t.symbol(), std::move(nargs));
        Term snf = s;
        std::uint64_t root_steps = 0;
        St st = eval_argnormal(s, snf, root_steps);
        if (st != St::Ok) return st;
        nf = snf;
        steps = arg_steps + root_steps;
        memo_.emplace(t, std::make_pair(nf, steps));
        return St::Ok;
    }

    std::uint64_t witnessed() const { return witnessed_; }

private:
    St eval_argnormal(const Term& s, Term& nf, std::uint64_t& steps) {
        if (auto it = memo_.find(s); it != memo_.end()) {
            nf = it->second.first;
            steps = it->second.second;
            witnessed_ += steps;
            return St::Ok;
        }
        std::optional<Term> reduct;
        for (const Rule& r : R_.rules()) {
            if (auto sigma = match_term(r.lhs, s)) {
                reduct = sigma->apply(r.rhs);
                break;
            }
        }
        if (!reduct) {
            nf = s;
            steps = 0;
            memo_.emplace(s, std::make_pair(s, 0));
            return St::Ok;
        }
        if (on_path_.count(s)) return St::Omega;
        on_path_.insert(s);
        ++witnessed_;
        Term rnf = *reduct;
        std::uint64_t k = 0;
        St st = eval(*reduct, rnf, k);
        on_path_.erase(s);
        if (st != St::Ok) return st;
        nf = rnf;
        steps = 1 + k;
        memo_.emplace(s, std::make_pair(nf, steps));
        return St::Ok;
    }

    const Trs& R_;
    std::uint64_t fuel_;
    std::uint64_t witnessed_ = 0;
    std::unordered_map<Term, std::pair<Term, std::uint64_t>, TermHash> memo_;
    std::unordered_set<Term, TermHash> on_path_;
};

inline DerivationHeight fast_dh_innermost(const Term& t, const Trs& R, std::uint64_t fuel) {
    FastInnermost ev(R, fuel);
    Term nf = t;
    std::uint64_t steps = 0;
    switch (ev.eval(t, nf, steps)) {
        case FastInnermost::St::Ok: return DerivationHeight::finite(steps);
        case FastInnermost::St::Omega: return DerivationHeight::omega();
        default: return DerivationHeight::at_least(ev.witnessed());
    }
}

// Parallel-innermost rewriting is deterministic for non-overlapping
// systems: iterate the single successor until a normal form.
inline DerivationHeight fast_dh_parallel(const Term& t, const Trs& R, std::uint64_t fuel) {
    Term cur = t;
    std::uint64_t steps = 0;
    std::unordered_set<Term, TermHash> visited{t};
    for (;;) {
        std::vector<Term> succ = parallel_innermost_successors(cur, R);
        if (succ.empty()) return DerivationHeight::finite(steps);
        cur = succ.front();
        ++steps;
        if (!visited.insert(cur).second) return DerivationHeight::omega();
        if (visited.size() > fuel) return DerivationHeight::at_least(steps);
    }
}

}  // namespace detail

/// Exact derivation height when the reduction graph fits in fuel; Omega
/// on a certified cycle, AtLeast on fuel exhaustion. Non-overlapping
/// systems take an exact fast path equivalent to the graph search.
inline DerivationHeight derivation_height(const Term& t, const Strategy& strategy, const Trs& R,
                                          std::uint64_t fuel) {
    if (fuel == 0) throw Error("derivation_height: fuel must be positive");
    switch (strategy.kind) {
        case Strategy::Kind::Innermost:
            if (non_overlapping(R)) return detail::fast_dh_innermost(t, R, fuel);
            return detail::DhExplorer([&R](const Term& u) { return innermost_successors(u, R); },
                                      fuel)
                .run(t);
        case Strategy::Kind::ParallelInnermost:
            if (non_overlapping(R)) return detail::fast_dh_parallel(t, R, fuel);
            return detail::DhExplorer(
                       [&R](const Term& u) { return parallel_innermost_successors(u, R); }, fuel)
                .run(t);
        case Strategy::Kind::RelativeInnermost: {
            const RelativeTrs& rel = *strategy.relative;
            auto succ = [&rel](const Term& u) {
                std::vector<Term> out;
                for (auto& [w, c] : relative_innermost_successors(u, rel)) out.push_back(w);
                return out;
            };
            return detail::DhExplorer(succ, fuel).run(t);
        }
    }
    throw Error("unreachable strategy kind");
}

/// All innermost normal forms reachable from t, with a completeness
/// flag (false when fuel cut the exploration).
struct NormalFormSet {
    std::vector<Term> forms;
    bool complete = true;
};

inline NormalFormSet normal_forms_innermost(const Term& t, const Trs& R, std::uint64_t fuel) {
    NormalFormSet out;
    std::vector<Term> queue{t};
    std::unordered_set<Term, TermHash> seen{t};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        std::vector<Term> succ = innermost_successors(queue[i], R);
        if (succ.empty()) {
            out.forms.push_back(queue[i]);
            continue;
        }
        for (const Term& s : succ) {
            if (seen.insert(s).second) {
                if (seen.size() > fuel) {
                    out.complete = false;
                    detail::sort_unique(out.forms);
                    return out;
                }
                queue.push_back(s);
            }
        }
    }
    detail::sort_unique(out.forms);
    return out;
}

/// Terms reachable under the strategy (t included), capped by fuel.
inline std::vector<Term> reachable_terms(const Term& t, const Strategy& strategy, const Trs& R,
                                         std::uint64_t fuel) {
    auto succ = [&](const Term& u) -> std::vector<Term> {
        switch (strategy.kind) {
            case Strategy::Kind::Innermost: return innermost_successors(u, R);
            case Strategy::Kind::ParallelInnermost: return parallel_innermost_successors(u, R);
            default: {
                std::vector<Term> out;
                for (auto& [w, c] : relative_innermost_successors(u, *strategy.relative))
                    out.push_back(w);
                return out;
            }
        }
    };
    std::vector<Term> queue{t};
    std::unordered_set<Term, TermHash> seen{t};
    for (std::size_t i = 0; i < queue.size() && seen.size() <= fuel; ++i)
        for (const Term& s : succ(queue[i]))
            if (seen.insert(s).second) queue.push_back(s);
    return queue;
}

/// t with every proper subterm rewritten to normal form by parallel
/// steps below the root; requires a non-overlapping system, where that
/// normal form is unique. Absent on fuel exhaustion.
inline std::optional<Term> argument_normalize(const Term& t, const Trs& R, std::uint64_t fuel) {
    if (fuel == 0) throw Error("argument_normalize: fuel must be positive");
    if (!non_overlapping(R))
        throw Error("argument_normalize: not supported for overlapping systems");
    if (t.is_variable()) return t;
    detail::FastInnermost ev(R, fuel);
    std::vector<Term> nargs;
    nargs.reserve(t.args().size());
    for (const Term& a : t.args()) {
        Term an = a;
        std::uint64_t k = 0;
        if (ev.eval(a, an, k) != detail::FastInnermost::St::Ok) return std::nullopt;
        nargs.push_back(std::move(an));
    }
    return Term::app(t.symbol(), std::move(nargs));
}

struct EmpiricalRow {
    std::size_t n = 0;
    DerivationHeight value;
};

/// Supremum of derivation heights over ground basic terms of size <= n,
/// for each n up to max_size. Fuel exhaustion or a truncated enumeration
/// degrades affected rows to AtLeast; suprema are never silently cut.
inline std::vector<EmpiricalRow> empirical_complexity(const Trs& R, const Strategy& strategy,
                                                      std::size_t max_size, std::uint64_t fuel,
                                                      std::size_t cap = 1000000) {
    GroundBasicEnumeration e = enumerate_ground_basic(R, max_size, cap);
    std::vector<DerivationHeight> by_size(max_size + 1, DerivationHeight::finite(0));
    for (const Term& t : e.terms) {
        std::size_t sz = term_size(t);
        DerivationHeight h = derivation_height(t, strategy, R, fuel);
        by_size[sz] = by_size[sz].sup(h);
    }
    std::vector<EmpiricalRow> rows;
    DerivationHeight acc = DerivationHeight::finite(0);
    for (std::size_t n = 1; n <= max_size; ++n) {
        acc = acc.sup(by_size[n]);
        DerivationHeight v = acc;
        if (e.truncated && !v.is_omega()) v = DerivationHeight::at_least(v.value);
        rows.push_back({n, v});
    }
    return rows;
}

/// Degree estimate from samples: least-squares slope of log value
/// against log size over the larger half of the finite samples, rounded
/// to the nearest integer. Absent when fewer than four finite samples
/// exist or no degree <= 6 fits. Labelled empirical everywhere; never a
/// proof.
inline std::optional<int> fit_growth_degree(const std::vector<EmpiricalRow>& samples) {
    std::vector<std::pair<std::size_t, std::uint64_t>> finite;
    for (const EmpiricalRow& r : samples)
        if (r.value.is_finite()) finite.emplace_back(r.n, r.value.value);
    if (finite.size() < 4) return std::nullopt;
    std::sort(finite.begin(), finite.end());
    std::size_t half = finite.size() / 2;
    std::vector<std::pair<std::size_t, std::uint64_t>> top(finite.begin() + half, finite.end());
    bool all_equal = true;
    for (const auto& [n, v] : top) all_equal &= v == top.front().second;
    if (all_equal) return 0;
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, v] : top)
        if (v > 0 && n > 0) pts.emplace_back(std::log(static_cast<double>(n)),
                                             std::log(static_cast<double>(v)));
    if (pts.size() < 2) return std::nullopt;
    double mx = 0, my = 0;
    for (auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (auto& [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if (sxx == 0) return std::nullopt;
    double slope = sxy / sxx;
    if (slope < -0.5) return std::nullopt;
    int d = static_cast<int>(std::llround(std::max(0.0, slope)));
    if (d > 6) return std::nullopt;
    return d;
}

}  // namespace pirc
