#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pirc/term.hpp"
#include "testutil.hpp"

using namespace pirc;
using testutil::app;
using testutil::v;

namespace {
Term plus(Term a, Term b) { return app("plus", {a, b}); }
Term S(Term a) { return app("S", {a}); }
Term zero() { return app("Zero"); }
Term nil() { return app("Nil"); }
Term size_(Term a) { return app("size", {a}); }
Term tree(Term a, Term b, Term c) { return app("Tree", {a, b, c}); }
}  // namespace

TEST_CASE("term_size counts every node") {
    CHECK(term_size(v("x")) == 1);
    CHECK(term_size(plus(zero(), S(zero()))) == 4);
    CHECK(term_size(size_(tree(zero(), nil(), nil()))) == 5);
}

TEST_CASE("positions of a term") {
    CHECK(positions(v("x")) == std::vector<Position>{Position{}});
    auto ps = positions(plus(v("x"), v("y")));
    CHECK(ps == std::vector<Position>{Position{}, Position{1}, Position{2}});
    // inner size occurrence of the structural-dependency example
    Term t = S(plus(size_(nil()), plus(size_(v("x")), zero())));
    auto all = positions(t);
    CHECK(std::find(all.begin(), all.end(), Position{1, 2, 1}) != all.end());
}

TEST_CASE("subterm_at") {
    Term t = S(plus(size_(nil()), plus(size_(v("x")), zero())));
    CHECK(subterm_at(plus(v("x"), v("y")), Position{2}) == v("y"));
    CHECK(subterm_at(t, Position{1, 1}) == size_(nil()));
    CHECK(subterm_at(t, Position{}) == t);
    CHECK_THROWS_AS(subterm_at(v("x"), Position{1}), Error);
}

TEST_CASE("replace_at") {
    CHECK(replace_at(plus(v("x"), v("y")), Position{2}, zero()) == plus(v("x"), zero()));
    Term t = plus(zero(), S(zero()));
    CHECK(replace_at(t, Position{}, v("z")) == v("z"));
    for (const Position& p : positions(t)) CHECK(replace_at(t, p, subterm_at(t, p)) == t);
    CHECK_THROWS_AS(replace_at(zero(), Position{1}, zero()), Error);
}

TEST_CASE("prefix order on positions") {
    CHECK(strictly_above(Position{1, 1}, Position{1}));
    CHECK_FALSE(strictly_above(Position{1}, Position{1, 1}));
    CHECK_FALSE(strictly_above(Position{1}, Position{2}));
    CHECK_FALSE(strictly_above(Position{1}, Position{1}));
    CHECK(strictly_above(Position{2, 3}, Position{}));
}

TEST_CASE("parallel positions") {
    CHECK(parallel_positions(Position{1}, Position{2}));
    CHECK_FALSE(parallel_positions(Position{1}, Position{1, 1}));
    CHECK_FALSE(parallel_positions(Position{}, Position{}));
}

TEST_CASE("strictly_above is a strict partial order") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len(0, 4), digit(1, 3);
    auto random_pos = [&] {
        Position p;
        int n = len(rng);
        for (int i = 0; i < n; ++i) p.path.push_back(digit(rng));
        return p;
    };
    for (int i = 0; i < 500; ++i) {
        Position a = random_pos(), b = random_pos(), c = random_pos();
        CHECK_FALSE(strictly_above(a, a));
        if (strictly_above(a, b)) CHECK_FALSE(strictly_above(b, a));
        if (strictly_above(a, b) && strictly_above(b, c)) CHECK(strictly_above(a, c));
    }
}

TEST_CASE("apply_substitution") {
    Substitution sigma;
    sigma.bind("x", zero());
    CHECK(apply_substitution(sigma, plus(v("x"), v("x"))) == plus(zero(), zero()));
    CHECK(apply_substitution(Substitution{}, plus(v("x"), v("y"))) == plus(v("x"), v("y")));
    Substitution tau;
    tau.bind("x", S(v("y")));
    CHECK(apply_substitution(tau, S(v("x"))) == S(S(v("y"))));
}

TEST_CASE("match_term") {
    auto m = match_term(plus(S(v("x")), v("y")), plus(S(zero()), zero()));
    REQUIRE(m);
    CHECK(m->apply(v("x")) == zero());
    CHECK(m->apply(v("y")) == zero());
    CHECK_FALSE(match_term(plus(S(v("x")), v("y")), plus(zero(), zero())));
    auto m2 = match_term(v("x"), plus(zero(), zero()));
    REQUIRE(m2);
    CHECK(m2->apply(v("x")) == plus(zero(), zero()));
    // non-linear pattern needs equal subjects
    CHECK(match_term(plus(v("x"), v("x")), plus(zero(), zero())));
    CHECK_FALSE(match_term(plus(v("x"), v("x")), plus(zero(), nil())));
}

TEST_CASE("match agrees with the substitution it inverts") {
    std::mt19937_64 rng(11);
    Trs R = testutil::load_trs("size.trs");
    for (int i = 0; i < 200; ++i) {
        Term pattern = plus(S(v("x")), plus(v("y"), v("z")));
        Substitution sigma;
        sigma.bind("x", testutil::random_constructor_term(R, rng, 3));
        sigma.bind("y", testutil::random_constructor_term(R, rng, 3));
        sigma.bind("z", testutil::random_constructor_term(R, rng, 3));
        auto m = match_term(pattern, sigma.apply(pattern));
        REQUIRE(m);
        for (const auto& x : {"x", "y", "z"}) CHECK(m->apply(v(x)) == sigma.apply(v(x)));
    }
}

TEST_CASE("unify") {
    Term f_y = app("f", {v("y")});
    auto u = unify(v("x"), f_y);
    REQUIRE(u);
    CHECK(u->apply(v("x")) == f_y);
    CHECK_FALSE(unify(app("leq", {app("0"), v("y")}), app("leq", {app("s", {v("xp")}), app("0")})));
    CHECK_FALSE(unify(v("x"), app("f", {v("x")})));  // occurs check
    auto w = unify(app("f", {v("x"), app("a")}), app("f", {app("b"), v("y")}));
    REQUIRE(w);
    CHECK(w->apply(app("f", {v("x"), app("a")})) == w->apply(app("f", {app("b"), v("y")})));
}

TEST_CASE("unify is symmetric in success") {
    std::mt19937_64 rng(13);
    Trs R = testutil::load_trs("size.trs");
    auto random_pattern = [&](auto&& self, int depth) -> Term {
        std::uniform_int_distribution<int> coin(0, 4);
        int c = coin(rng);
        if (depth <= 1 || c == 0) return v("v" + std::to_string(coin(rng)));
        if (c == 1) return zero();
        if (c == 2) return S(self(self, depth - 1));
        return plus(self(self, depth - 1), self(self, depth - 1));
    };
    for (int i = 0; i < 300; ++i) {
        Term s = random_pattern(random_pattern, 3);
        Term t = random_pattern(random_pattern, 3);
        auto st = unify(s, t);
        auto ts = unify(t, s);
        CHECK(st.has_value() == ts.has_value());
        if (st) CHECK(st->apply(s) == st->apply(t));
    }
}

TEST_CASE("term size grows under ground substitution") {
    std::mt19937_64 rng(17);
    Trs R = testutil::load_trs("size.trs");
    for (int i = 0; i < 200; ++i) {
        Term t = plus(v("x"), S(plus(v("y"), v("x"))));
        Substitution sigma;
        sigma.bind("x", testutil::random_constructor_term(R, rng, 4));
        sigma.bind("y", testutil::random_constructor_term(R, rng, 4));
        CHECK(term_size(sigma.apply(t)) >= term_size(t));
    }
}

TEST_CASE("alpha equivalence") {
    CHECK(alpha_equivalent(plus(v("x"), v("y")), plus(v("a"), v("b"))));
    CHECK_FALSE(alpha_equivalent(plus(v("x"), v("x")), plus(v("a"), v("b"))));
    CHECK_FALSE(alpha_equivalent(plus(v("x"), v("y")), plus(v("a"), v("a"))));
    CHECK(alpha_equivalent(zero(), zero()));
}
