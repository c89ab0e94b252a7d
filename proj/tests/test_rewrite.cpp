#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pirc/dt.hpp"
#include "pirc/rewrite.hpp"
#include "testutil.hpp"

using namespace pirc;
using testutil::app;
using testutil::v;

namespace {

Term S(Term a) { return app("S", {a}); }
Term zero() { return app("Zero"); }
Term nil() { return app("Nil"); }
Term plus(Term a, Term b) { return app("plus", {a, b}); }
Term size_(Term a) { return app("size", {a}); }
Term tree(Term a, Term b, Term c) { return app("Tree", {a, b, c}); }

Term running_example() { return size_(tree(zero(), nil(), tree(zero(), nil(), nil()))); }

Term s_tower(int n, Term base) {
    Term t = base;
    for (int i = 0; i < n; ++i) t = S(t);
    return t;
}

bool has_any_redex(const Term& t, const Trs& R) {
    for (const Position& p : positions(t))
        if (is_redex(subterm_at(t, p), R)) return true;
    return false;
}

}  // namespace

TEST_CASE("innermost redexes") {
    Trs R = testutil::load_trs("size.trs");
    Term t = S(plus(size_(nil()), size_(tree(zero(), nil(), nil()))));
    CHECK(innermost_redexes(t, R) == std::vector<Position>{Position{1, 1}, Position{1, 2}});
    CHECK(innermost_redexes(S(S(zero())), R).empty());
    CHECK(innermost_redexes(plus(zero(), zero()), R) == std::vector<Position>{Position{}});
}

TEST_CASE("innermost successors") {
    Trs R = testutil::load_trs("size.trs");
    CHECK(innermost_successors(plus(zero(), S(zero())), R) == std::vector<Term>{S(zero())});
    CHECK(innermost_successors(size_(nil()), R) == std::vector<Term>{zero()});
    CHECK(innermost_successors(S(zero()), R).empty());
}

TEST_CASE("parallel innermost successors rewrite all innermost redexes at once") {
    Trs R = testutil::load_trs("size.trs");
    Term t = S(plus(size_(nil()), size_(tree(zero(), nil(), nil()))));
    Term expected = S(plus(zero(), S(plus(size_(nil()), size_(nil())))));
    CHECK(parallel_innermost_successors(t, R) == std::vector<Term>{expected});
    CHECK(parallel_innermost_successors(S(S(zero())), R).empty());
}

TEST_CASE("parallel step branches on overlapping rule choice") {
    Trs R = testutil::load_trs("ex14.trs");
    auto succ = parallel_innermost_successors(app("a"), R);
    std::vector<Term> expected{app("f", {app("b"), app("b")}), app("f", {app("b"), app("c")})};
    std::sort(expected.begin(), expected.end());
    CHECK(succ == expected);
}

TEST_CASE("relative innermost successors count one per step") {
    RelativeTrs rel = testutil::load_relative("ex11_relative.trs");
    Term t = plus(S(zero()), zero());
    auto succ = relative_innermost_successors(t, rel);
    REQUIRE_FALSE(succ.empty());
    for (const auto& [w, c] : succ) CHECK(c == 1);
    // one counted step reaches the normal form S(Zero)
    bool found = false;
    for (const auto& [w, c] : succ) found |= w == S(zero());
    CHECK(found);
    CHECK(relative_innermost_successors(S(zero()), rel).empty());
}

TEST_CASE("derivation heights of the running example") {
    Trs R = testutil::load_trs("size.trs");
    CHECK(derivation_height(running_example(), Strategy::innermost(), R, 100000) ==
          DerivationHeight::finite(7));
    CHECK(derivation_height(running_example(), Strategy::parallel_innermost(), R, 100000) ==
          DerivationHeight::finite(5));
}

TEST_CASE("self loop yields omega with a certificate") {
    Trs loop({Rule(app("a"), app("a"))});
    CHECK(derivation_height(app("a"), Strategy::innermost(), loop, 1000) ==
          DerivationHeight::omega());
    CHECK(derivation_height(app("a"), Strategy::parallel_innermost(), loop, 1000) ==
          DerivationHeight::omega());
}

TEST_CASE("fuel exhaustion reports a lower bound, not omega") {
    Trs R = testutil::load_trs("size.trs");
    DerivationHeight h = derivation_height(running_example(), Strategy::innermost(), R, 3);
    CHECK(h.kind == DerivationHeight::Kind::AtLeast);
}

TEST_CASE("relative semantics of the free plus rule") {
    RelativeTrs rel = testutil::load_relative("ex11_relative.trs");
    Trs full = rel.combined();
    for (int n = 0; n <= 3; ++n) {
        for (int m = 0; m <= 2; ++m) {
            Term t = plus(s_tower(n, zero()), s_tower(m, zero()));
            CHECK(derivation_height(t, Strategy::relative_innermost(rel), full, 100000) ==
                  DerivationHeight::finite(1));
            CHECK(derivation_height(t, Strategy::innermost(), full, 100000) ==
                  DerivationHeight::finite(static_cast<std::uint64_t>(n) + 1));
        }
    }
}

TEST_CASE("argument_normalize") {
    Trs R = testutil::load_trs("size.trs");
    auto r1 = argument_normalize(plus(size_(nil()), size_(nil())), R, 100000);
    REQUIRE(r1);
    CHECK(*r1 == plus(zero(), zero()));
    Term keep = app("f0", {zero()});
    Trs R2({Rule(app("g", {v("x")}), v("x"))});
    auto r2 = argument_normalize(app("g", {zero()}), R2, 1000);
    REQUIRE(r2);
    CHECK(*r2 == app("g", {zero()}));  // root redex untouched
    auto r3 = argument_normalize(plus(zero(), zero()), R, 1000);
    REQUIRE(r3);
    CHECK(*r3 == plus(zero(), zero()));
    Trs overlapping = testutil::load_trs("ex14.trs");
    CHECK_THROWS_AS(argument_normalize(app("f", {app("b"), app("b")}), overlapping, 1000), Error);
}

TEST_CASE("normal forms agree across the step relations") {
    std::mt19937_64 rng(31);
    for (const char* f : {"size.trs", "ex14.trs", "doubles.trs"}) {
        Trs R = testutil::load_trs(f);
        for (int i = 0; i < 200; ++i) {
            Term t = testutil::random_ground_term(R, rng, 4);
            bool no_inner = innermost_redexes(t, R).empty();
            CHECK(no_inner == parallel_innermost_successors(t, R).empty());
            CHECK(no_inner == innermost_successors(t, R).empty());
            CHECK(no_inner == !has_any_redex(t, R));
        }
    }
}

TEST_CASE("a parallel step is a nonempty sequence of innermost steps on the same redexes") {
    std::mt19937_64 rng(37);
    for (const char* f : {"size.trs", "ex14.trs"}) {
        Trs R = testutil::load_trs(f);
        for (int i = 0; i < 150; ++i) {
            Term t = testutil::random_ground_term(R, rng, 4);
            std::vector<Position> ps = innermost_redexes(t, R);
            for (const Term& u : parallel_innermost_successors(t, R)) {
                // replay redex by redex; every intermediate step must be
                // a legal innermost step
                std::vector<Term> frontier{t};
                for (const Position& p : ps) {
                    std::vector<Term> next;
                    for (const Term& cur : frontier) {
                        auto ir = innermost_redexes(cur, R);
                        REQUIRE(std::find(ir.begin(), ir.end(), p) != ir.end());
                        for (const Term& c : detail::contracta(subterm_at(cur, p), R))
                            next.push_back(replace_at(cur, p, c));
                    }
                    frontier = std::move(next);
                }
                CHECK(std::find(frontier.begin(), frontier.end(), u) != frontier.end());
                REQUIRE_FALSE(ps.empty());
            }
        }
    }
}

TEST_CASE("parallel rewriting is never slower than sequential") {
    for (const char* f : {"size.trs", "doubles.trs", "mod.trs"}) {
        Trs R = testutil::load_trs(f);
        for (const Term& t : enumerate_ground_basic(R, 6, 100000).terms) {
            DerivationHeight par = derivation_height(t, Strategy::parallel_innermost(), R, 100000);
            DerivationHeight seq = derivation_height(t, Strategy::innermost(), R, 100000);
            REQUIRE(par.is_finite());
            REQUIRE(seq.is_finite());
            CHECK(par.value <= seq.value);
        }
    }
}

TEST_CASE("fast evaluation agrees with exhaustive graph search") {
    for (const char* f : {"size.trs", "doubles.trs", "mod.trs", "recursion_3.trs"}) {
        Trs R = testutil::load_trs(f);
        REQUIRE(non_overlapping(R));
        for (const Term& t : enumerate_ground_basic(R, 5, 100000).terms) {
            DerivationHeight fast_seq = derivation_height(t, Strategy::innermost(), R, 1000000);
            DerivationHeight graph_seq =
                detail::DhExplorer([&](const Term& u) { return innermost_successors(u, R); },
                                   1000000)
                    .run(t);
            CHECK(fast_seq == graph_seq);
            DerivationHeight fast_par =
                derivation_height(t, Strategy::parallel_innermost(), R, 1000000);
            DerivationHeight graph_par =
                detail::DhExplorer(
                    [&](const Term& u) { return parallel_innermost_successors(u, R); }, 1000000)
                    .run(t);
            CHECK(fast_par == graph_par);
        }
    }
}

TEST_CASE("nested subterm decomposition of parallel derivation height") {
    Trs R = testutil::load_trs("size.trs");
    for (const Term& t : testutil::all_ground_terms(R, 7)) {
        DerivationHeight lhs = derivation_height(t, Strategy::parallel_innermost(), R, 1000000);
        REQUIRE(lhs.is_finite());
        std::uint64_t best = 0;
        for (const auto& chain : msdc(t, R)) {
            std::uint64_t sum = 0;
            for (const Position& p : chain) {
                auto an = argument_normalize(subterm_at(t, p), R, 1000000);
                REQUIRE(an);
                DerivationHeight h =
                    derivation_height(*an, Strategy::parallel_innermost(), R, 1000000);
                REQUIRE(h.is_finite());
                sum += h.value;
            }
            best = std::max(best, sum);
        }
        CHECK(lhs.value == best);
    }
}

TEST_CASE("the two parallel reduction paths of the overlapping witness never meet") {
    Trs R = testutil::load_trs("ex14.trs");
    auto branches = parallel_innermost_successors(app("a"), R);
    REQUIRE(branches.size() == 2);
    CHECK(derivation_height(branches[0], Strategy::parallel_innermost(), R, 1000) ==
          DerivationHeight::omega());
    CHECK(derivation_height(branches[1], Strategy::parallel_innermost(), R, 1000) ==
          DerivationHeight::omega());
    auto seen0 = reachable_terms(branches[0], Strategy::parallel_innermost(), R, 1000);
    auto seen1 = reachable_terms(branches[1], Strategy::parallel_innermost(), R, 1000);
    for (const Term& a : seen0)
        for (const Term& b : seen1) CHECK(a != b);
}

TEST_CASE("empirical complexity of the size system") {
    Trs R = testutil::load_trs("size.trs");
    auto irc = empirical_complexity(R, Strategy::innermost(), 2, 100000);
    REQUIRE(irc.size() == 2);
    CHECK(irc[0].value == DerivationHeight::finite(0));  // no basic terms of size 1
    CHECK(irc[1].value == DerivationHeight::finite(1));
    auto pirc = empirical_complexity(R, Strategy::parallel_innermost(), 2, 100000);
    CHECK(pirc[1].value == DerivationHeight::finite(1));
}

TEST_CASE("sequential and parallel evaluation coincide without parallelism") {
    Trs R = testutil::load_trs("plus_only.trs");
    auto irc = empirical_complexity(R, Strategy::innermost(), 8, 100000);
    auto pirc = empirical_complexity(R, Strategy::parallel_innermost(), 8, 100000);
    REQUIRE(irc.size() == pirc.size());
    for (std::size_t i = 0; i < irc.size(); ++i) CHECK(irc[i].value == pirc[i].value);
    // step-for-step: every parallel step from a basic term is an
    // innermost step
    for (const Term& t : enumerate_ground_basic(R, 8, 100000).terms) {
        Term cur = t;
        for (;;) {
            auto succ = parallel_innermost_successors(cur, R);
            if (succ.empty()) break;
            REQUIRE(succ.size() == 1);
            auto seq = innermost_successors(cur, R);
            CHECK(std::find(seq.begin(), seq.end(), succ.front()) != seq.end());
            cur = succ.front();
        }
    }
}

TEST_CASE("growth degree fit") {
    Trs doubles = testutil::load_trs("doubles.trs");
    auto irc = empirical_complexity(doubles, Strategy::innermost(), 12, 1000000);
    auto pirc = empirical_complexity(doubles, Strategy::parallel_innermost(), 12, 1000000);
    CHECK(fit_growth_degree(irc) == 2);
    CHECK(fit_growth_degree(pirc) == 1);

    std::vector<EmpiricalRow> constant;
    for (std::size_t n = 1; n <= 6; ++n) constant.push_back({n, DerivationHeight::finite(5)});
    CHECK(fit_growth_degree(constant) == 0);

    std::vector<EmpiricalRow> few{{1, DerivationHeight::finite(1)},
                                  {2, DerivationHeight::finite(2)}};
    CHECK_FALSE(fit_growth_degree(few));
}
