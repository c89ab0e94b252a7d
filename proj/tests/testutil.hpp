#pragma once

#include <random>
#include <string>
#include <vector>

#include "pirc/driver.hpp"
#include "pirc/tpdb.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(PIRC_FIXTURES) + "/" + name;
}

inline pirc::Trs load_trs(const std::string& name) {
    pirc::ParsedSystem sys = pirc::parse_system(pirc::read_file(fixture_path(name)));
    if (sys.relative) throw pirc::Error("fixture " + name + " is relative");
    return sys.trs;
}

inline pirc::RelativeTrs load_relative(const std::string& name) {
    pirc::ParsedSystem sys = pirc::parse_system(pirc::read_file(fixture_path(name)));
    if (!sys.relative) throw pirc::Error("fixture " + name + " is not relative");
    return sys.rel;
}

// Convenience constructors for hand-built terms.
inline pirc::Term v(const std::string& name) { return pirc::Term::var(name); }
inline pirc::Term app(const std::string& name, std::vector<pirc::Term> args = {}) {
    int arity = static_cast<int>(args.size());
    return pirc::Term::app(pirc::Symbol::plain(name, arity), std::move(args));
}

// Random ground constructor term over the constructors of R.
inline pirc::Term random_constructor_term(const pirc::Trs& R, std::mt19937_64& rng,
                                          int max_depth) {
    std::vector<pirc::Symbol> cs;
    std::vector<pirc::Symbol> leaves;
    for (const pirc::Symbol& s : R.signature()) {
        if (R.is_defined(s)) continue;
        cs.push_back(s);
        if (s.arity == 0) leaves.push_back(s);
    }
    if (leaves.empty()) throw pirc::Error("no nullary constructor");
    if (max_depth <= 1) {
        std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
        return pirc::Term::app(leaves[pick(rng)]);
    }
    std::uniform_int_distribution<std::size_t> pick(0, cs.size() - 1);
    const pirc::Symbol& s = cs[pick(rng)];
    std::vector<pirc::Term> args;
    for (int i = 0; i < s.arity; ++i) args.push_back(random_constructor_term(R, rng, max_depth - 1));
    return pirc::Term::app(s, std::move(args));
}

// Random ground term over the full signature of R.
inline pirc::Term random_ground_term(const pirc::Trs& R, std::mt19937_64& rng, int max_depth) {
    std::vector<pirc::Symbol> all;
    std::vector<pirc::Symbol> leaves;
    for (const pirc::Symbol& s : R.signature()) {
        all.push_back(s);
        if (s.arity == 0) leaves.push_back(s);
    }
    if (max_depth <= 1 || leaves.empty()) {
        if (leaves.empty()) throw pirc::Error("no nullary symbol");
        std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
        return pirc::Term::app(leaves[pick(rng)]);
    }
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    const pirc::Symbol& s = all[pick(rng)];
    std::vector<pirc::Term> args;
    for (int i = 0; i < s.arity; ++i) args.push_back(random_ground_term(R, rng, max_depth - 1));
    return pirc::Term::app(s, std::move(args));
}

// All ground terms over the signature of R with size <= max_size.
inline std::vector<pirc::Term> all_ground_terms(const pirc::Trs& R, std::size_t max_size) {
    std::vector<std::vector<pirc::Term>> by_size(max_size + 1);
    for (std::size_t sz = 1; sz <= max_size; ++sz) {
        for (const pirc::Symbol& s : R.signature()) {
            if (static_cast<std::size_t>(s.arity) + 1 > sz) continue;
            if (s.arity == 0) {
                if (sz == 1) by_size[sz].push_back(pirc::Term::app(s));
                continue;
            }
            std::vector<pirc::Term> cur;
            std::function<void(int, std::size_t)> go = [&](int argi, std::size_t left) {
                int remaining = s.arity - argi;
                if (remaining == 0) {
                    if (left == 0) by_size[sz].push_back(pirc::Term::app(s, cur));
                    return;
                }
                for (std::size_t k = 1; k + static_cast<std::size_t>(remaining) - 1 <= left; ++k) {
                    for (const pirc::Term& t : by_size[k]) {
                        cur.push_back(t);
                        go(argi + 1, left - k);
                        cur.pop_back();
                    }
                }
            };
            go(0, sz - 1);
        }
    }
    std::vector<pirc::Term> out;
    for (auto& level : by_size)
        for (pirc::Term& t : level) out.push_back(std::move(t));
    return out;
}

}  // namespace testutil
