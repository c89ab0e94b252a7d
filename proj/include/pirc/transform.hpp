#pragma once

#include <vector>

#include "pirc/confluence.hpp"
#include "pirc/dt.hpp"

namespace pirc {

/// delta(<D, S, R>) = S / ((D \ S) u R): the counted tuples become
/// ordinary rules (sharp and compound symbols join the signature as
/// plain members), everything else rewrites for free.
inline RelativeTrs delta(const DtProblem& p) {
    std::vector<Rule> counted;
    for (std::size_t i : p.counted) counted.push_back(p.dts[i].as_rule());
    std::vector<Rule> free_rules;
    for (std::size_t i = 0; i < p.dts.size(); ++i)
        if (!p.is_counted(i)) free_rules.push_back(p.dts[i].as_rule());
    for (const Rule& r : p.base.rules()) free_rules.push_back(r);
    std::vector<Symbol> shared;
    for (const Symbol& s : p.base.signature()) shared.push_back(s);
    RelativeTrs rel;
    rel.counted = Trs(std::move(counted), shared);
    rel.free = Trs(std::move(free_rules), shared);
    return rel;
}

}  // namespace pirc
