#pragma once

#include <optional>
#include <string>

#include "pirc/trs.hpp"

namespace pirc {

/// Two rules whose left-hand sides overlap at a position of the first.
struct OverlapWitness {
    std::size_t rule_a = 0;
    std::size_t rule_b = 0;
    Position at;

    std::string to_string() const {
        return "rules " + std::to_string(rule_a + 1) + " and " + std::to_string(rule_b + 1) +
               " overlap at " + at.to_string();
    }
};

/// Absent iff no lhs unifies with a non-variable subterm of any lhs
/// (rules renamed apart). A rule paired with itself is only checked at
/// non-root positions unless include_self_root is set; with it set,
/// every rule trivially overlaps with its own renamed copy.
inline std::optional<OverlapWitness> is_non_overlapping(const Trs& R,
                                                        bool include_self_root = false) {
    const auto& rules = R.rules();
    std::set<std::string> avoid;
    for (const Rule& r : rules)
        for (const auto& v : variables_of(r.lhs)) avoid.insert(v);
    for (std::size_t i = 0; i < rules.size(); ++i) {
        for (std::size_t j = 0; j < rules.size(); ++j) {
            Rule other = rename_apart(rules[j], avoid);
            for (const Position& p : positions(rules[i].lhs)) {
                if (i == j && p.is_root() && !include_self_root) continue;
                Term sub = subterm_at(rules[i].lhs, p);
                if (sub.is_variable()) continue;
                if (unify(sub, other.lhs)) return OverlapWitness{i, j, p};
            }
        }
    }
    return std::nullopt;
}

inline bool non_overlapping(const Trs& R) { return !is_non_overlapping(R).has_value(); }

/// Verdict for confluence of the parallel-innermost relation. Only the
/// non-overlapping criterion can certify confluence; everything else is
/// Unknown (never a non-confluence claim).
struct ConfluenceVerdict {
    bool confluent = false;
    std::optional<OverlapWitness> witness;  // set iff !confluent

    std::string to_string() const {
        return confluent ? "confluent (non-overlapping)" : "unknown (" + witness->to_string() + ")";
    }
};

inline ConfluenceVerdict confluence_parallel_innermost(const Trs& R) {
    if (auto w = is_non_overlapping(R)) return ConfluenceVerdict{false, w};
    return ConfluenceVerdict{true, std::nullopt};
}

}  // namespace pirc
