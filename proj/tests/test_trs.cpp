#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pirc/trs.hpp"
#include "testutil.hpp"

using namespace pirc;
using testutil::app;
using testutil::v;

TEST_CASE("defined and constructor symbols of the size system") {
    Trs R = testutil::load_trs("size.trs");
    std::set<std::string> defined;
    for (const Symbol& s : R.defined_symbols()) defined.insert(s.name);
    CHECK(defined == std::set<std::string>{"plus", "size"});
    std::set<std::string> ctors;
    for (const Symbol& s : R.constructor_symbols()) ctors.insert(s.name);
    CHECK(ctors == std::set<std::string>{"Zero", "S", "Nil", "Tree"});
    CHECK(Trs{}.defined_symbols().empty());
}

TEST_CASE("signature partitions into defined and constructors") {
    for (const char* f : {"size.trs", "doubles.trs", "mod.trs", "ex14.trs", "recursion_3.trs"}) {
        Trs R = testutil::load_trs(f);
        auto d = R.defined_symbols();
        auto c = R.constructor_symbols();
        CHECK(d.size() + c.size() == R.signature().size());
        for (const Symbol& s : d) CHECK_FALSE(c.count(s));
    }
}

TEST_CASE("defined positions") {
    Trs R = testutil::load_trs("size.trs");
    // rhs of the recursive size rule
    Term r = R.rules()[3].rhs;
    CHECK(defined_positions(r, R) ==
          std::vector<Position>{Position{1}, Position{1, 1}, Position{1, 2}});
    CHECK(defined_positions(app("Zero"), R).empty());
    CHECK(defined_positions(app("plus", {v("x"), v("y")}), R) == std::vector<Position>{Position{}});
}

TEST_CASE("defined positions survive constructor instantiation") {
    Trs R = testutil::load_trs("size.trs");
    std::mt19937_64 rng(23);
    for (const Rule& rule : R.rules()) {
        for (int i = 0; i < 50; ++i) {
            Substitution sigma;
            for (const auto& x : variables_of(rule.lhs))
                sigma.bind(x, testutil::random_constructor_term(R, rng, 3));
            Term inst = sigma.apply(rule.rhs);
            auto before = defined_positions(rule.rhs, R);
            auto after = defined_positions(inst, R);
            CHECK(before.size() == after.size());
            for (const Position& p : before)
                CHECK(std::find(after.begin(), after.end(), p) != after.end());
        }
    }
}

TEST_CASE("is_basic") {
    Trs R = testutil::load_trs("size.trs");
    Term t1 = app("size", {app("Tree", {app("Zero"), app("Nil"), app("Nil")})});
    CHECK(is_basic(t1, R));
    CHECK_FALSE(is_basic(app("size", {app("size", {app("Nil")})}), R));
    CHECK_FALSE(is_basic(app("Tree", {app("Zero"), app("Nil"), app("Nil")}), R));
    CHECK(is_basic(app("size", {v("x")}), R));
}

TEST_CASE("ground basic enumeration of the size system") {
    Trs R = testutil::load_trs("size.trs");
    auto e = enumerate_ground_basic(R, 2, 100);
    REQUIRE(e.terms.size() == 2);
    CHECK(e.terms[0] == app("size", {app("Zero")}));
    CHECK(e.terms[1] == app("size", {app("Nil")}));
    CHECK_FALSE(e.truncated);
    CHECK(enumerate_ground_basic(R, 1, 100).terms.empty());
    CHECK(enumerate_ground_basic(Trs{}, 5, 100).terms.empty());
}

TEST_CASE("enumerated terms are basic, bounded and come in size order") {
    for (const char* f : {"size.trs", "doubles.trs", "mod.trs"}) {
        Trs R = testutil::load_trs(f);
        auto e = enumerate_ground_basic(R, 6, 100000);
        REQUIRE_FALSE(e.terms.empty());
        std::size_t last = 0;
        for (const Term& t : e.terms) {
            CHECK(is_basic(t, R));
            CHECK(variables_of(t).empty());
            std::size_t sz = term_size(t);
            CHECK(sz <= 6);
            CHECK(sz >= last);
            last = sz;
        }
        // no duplicates
        std::set<std::string> seen;
        for (const Term& t : e.terms) CHECK(seen.insert(t.to_string()).second);
    }
}

TEST_CASE("enumeration truncates at the cap with a flag") {
    Trs R = testutil::load_trs("size.trs");
    auto e = enumerate_ground_basic(R, 6, 5);
    CHECK(e.terms.size() == 5);
    CHECK(e.truncated);
    CHECK_THROWS_AS(enumerate_ground_basic(R, 3, 0), Error);
}

TEST_CASE("rule validation") {
    CHECK_THROWS_AS(Rule(v("x"), v("x")), Error);
    CHECK_THROWS_AS(Rule(app("f", {v("x")}), v("y")), Error);
}

TEST_CASE("rename_apart") {
    Rule r(app("plus", {app("S", {v("x")}), v("y")}), app("S", {app("plus", {v("x"), v("y")})}));
    Rule renamed = rename_apart(r, {"x", "y"});
    CHECK(alpha_equivalent(r, renamed));
    auto vars = variables_of(renamed.lhs);
    CHECK_FALSE(vars.count("x"));
    CHECK_FALSE(vars.count("y"));

    Rule ground(app("a"), app("b"));
    CHECK(rename_apart(ground, {"x"}) == ground);

    Rule once = rename_apart(r, {});
    Rule twice = rename_apart(r, variables_of(once.lhs));
    CHECK(alpha_equivalent(once, twice));
}
