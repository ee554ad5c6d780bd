#include "doctest.h"

#include <random>

#include "k5kit/formula.hpp"
#include "k5kit/verification.hpp"
#include "support.hpp"

using namespace k5kit;
using k5kit::testing::F;

TEST_CASE("parsing eliminates negation and implication") {
    Formula p = Formula::atom("p"), q = Formula::atom("q");
    Formula np = Formula::neg_atom("p"), nq = Formula::neg_atom("q");

    CHECK(F("p & ~p") == Formula::conj(p, np));
    CHECK(F("~(p | []q)") == Formula::conj(np, Formula::dia(nq)));
    CHECK(F("<>p -> []<>p") == Formula::disj(Formula::box(np), Formula::box(Formula::dia(p))));
    CHECK(F("~~p") == p);
    CHECK(F("~T") == Formula::bottom());
    CHECK(F("~<>p") == Formula::box(np));
    CHECK(F("a -> b -> c") == F("a -> (b -> c)"));
    CHECK(F("a & b & c") == Formula::conj(Formula::conj(Formula::atom("a"), Formula::atom("b")),
                                          Formula::atom("c")));
    CHECK(F("p & q | r") == Formula::disj(Formula::conj(p, q), Formula::atom("r")));
}

TEST_CASE("parse errors carry offset and expectations") {
    CHECK_THROWS_AS(F("p &"), ParseError);
    try {
        F("p & | q");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
        CHECK(!e.expected.empty());
    }
    try {
        F("(p | q");
    } catch (const ParseError& e) {
        CHECK(e.offset == 6);
        CHECK(e.expected == std::vector<std::string>{"')'"});
    }
    CHECK_THROWS_AS(F("P"), ParseError);  // uppercase is not an atom
    CHECK_THROWS_AS(F("p q"), ParseError);
    CHECK_THROWS_AS(F(""), ParseError);
}

TEST_CASE("negate on the basic cases") {
    CHECK(negate(Formula::neg_atom("p")) == Formula::atom("p"));
    CHECK(negate(Formula::box(Formula::atom("p"))) == Formula::dia(Formula::neg_atom("p")));
    CHECK(negate(Formula::top()) == Formula::bottom());
}

TEST_CASE("literal sets are polarity sensitive") {
    auto ls = literals(F("[]p | <>~q"));
    CHECK(ls == std::set<Literal>{Literal("p", false), Literal("q", true)});
    CHECK(literals(Formula::top()).empty());
    CHECK(literals(F("p & ~p")) == std::set<Literal>{Literal("p", false), Literal("p", true)});
}

TEST_CASE("printing uses minimal parentheses") {
    CHECK(print_formula(F("[]<>p")) == "[]<>p");
    CHECK(print_formula(Formula::conj(Formula::atom("p"),
                                      Formula::disj(Formula::atom("q"), Formula::atom("r")))) ==
          "p & (q | r)");
    CHECK(print_formula(Formula::neg_atom("p")) == "~p");
    CHECK(print_formula(F("p & q & r")) == "p & q & r");
    CHECK(print_formula(F("(p | q) & r")) == "(p | q) & r");
}

TEST_CASE("negate is an involution and maps literal sets pointwise") {
    auto corpus = k5kit::testing::random_corpus(11, 300, 10, {"p", "q", "r"});
    for (const auto& f : corpus) {
        CHECK(negate(negate(f)) == f);
        std::set<Literal> flipped;
        for (const auto& l : literals(f)) flipped.insert(l.negate());
        CHECK(literals(negate(f)) == flipped);
    }
}

TEST_CASE("print/parse round trips") {
    auto corpus = k5kit::testing::random_corpus(23, 300, 10, {"p", "q", "alpha_2"});
    for (const auto& f : corpus) {
        std::string s = print_formula(f);
        CHECK(parse_formula(s) == f);
        CHECK(print_formula(parse_formula(s)) == s);
    }
}

TEST_CASE("formula ordering is a strict total order on distinct values") {
    auto corpus = k5kit::testing::random_corpus(5, 60, 6, {"p", "q"});
    for (const auto& a : corpus)
        for (const auto& b : corpus) {
            if (a == b) {
                CHECK(Formula::compare(a, b) == 0);
            } else {
                CHECK(Formula::compare(a, b) != 0);
                CHECK(Formula::compare(a, b) == -Formula::compare(b, a));
            }
        }
}
