#include "doctest.h"

#include <random>

#include "k5kit/prover.hpp"
#include "support.hpp"

using namespace k5kit;
using k5kit::testing::F;

namespace {

void check_rules_in_set(const ProofTree& t, Logic logic) {
    auto rules = rule_set(logic);
    CHECK(std::find(rules.begin(), rules.end(), t.rule) != rules.end());
    for (const auto& p : t.premises) check_rules_in_set(p, logic);
}

}  // namespace

TEST_CASE("rule application on representative cases") {
    // trunk box spawns a fresh bracket component
    LayeredSequent g1;
    g1.add(Label::trunk(), F("[]p"));
    auto items = unsaturated_items(g1, Logic::K5);
    REQUIRE(items.size() == 1);
    auto app = apply_rule(g1, items[0], Logic::K5);
    CHECK(app.rule == RuleId::BoxT);
    REQUIRE(app.premises.size() == 1);
    CHECK(app.premises[0].contains(Label::trunk(), F("[]p")));
    CHECK(app.premises[0].contains(Label::bracket(1), F("p")));

    // KB5 moves the whole trunk into the crown
    LayeredSequent g2;
    g2.add(Label::trunk(), F("q"));
    g2.add(Label::trunk(), F("[]p"));
    auto items2 = unsaturated_items(g2, Logic::KB5);
    REQUIRE(items2.size() == 1);
    auto app2 = apply_rule(g2, items2[0], Logic::KB5);
    CHECK(app2.rule == RuleId::BoxTPrime);
    REQUIRE(app2.premises.size() == 1);
    const auto& p2 = app2.premises[0];
    CHECK(p2.n() == 0);
    CHECK(p2.contains(Label::bracket(1), F("q")));
    CHECK(p2.contains(Label::bracket(1), F("[]p")));
    CHECK(p2.contains(Label::bracket(2), F("p")));

    // crown diamond reaches an existing (empty) double component
    LayeredSequent g3;
    g3.add(Label::trunk(), F("q"));
    g3.add(Label::bracket(1), F("<>p"));
    g3.ensure_component(Label::dbl(1));
    auto items3 = unsaturated_items(g3, Logic::K5);
    bool found = false;
    for (const auto& item : items3)
        if (item.obligation.kind == Obligation::Kind::DiaAt &&
            *item.obligation.target == Label::dbl(1)) {
            auto app3 = apply_rule(g3, item, Logic::K5);
            CHECK(app3.rule == RuleId::DiaC);
            CHECK(app3.premises[0].contains(Label::dbl(1), F("p")));
            found = true;
        }
    CHECK(found);
}

TEST_CASE("proving and refuting sample sequents") {
    LayeredSequent ax;
    ax.add(Label::trunk(), F("p"));
    ax.add(Label::trunk(), F("~p"));
    auto out = prove(ax, Logic::K5);
    REQUIRE(out.proved());
    CHECK(out.proof->rule == RuleId::IdP);

    auto five = prove(initial_sequent(F("<>p -> []<>p"), Logic::K5), Logic::K5);
    CHECK(five.proved());

    auto four = prove(initial_sequent(F("[]p -> [][]p"), Logic::K5), Logic::K5);
    REQUIRE_FALSE(four.proved());
    REQUIRE(four.refuted.has_value());
    CHECK(unsaturated_items(*four.refuted, Logic::K5).empty());
    CHECK_FALSE(is_closed(*four.refuted).has_value());
    auto [model, interp] = countermodel_from_leaf(*four.refuted, Logic::K5);
    CHECK(is_l_frame(model, Logic::K5));
    CHECK_FALSE(eval(model, interp.at(Label::trunk()), F("[]p -> [][]p")));
}

TEST_CASE("decide on the named axioms") {
    CHECK(decide(F("<>p -> []<>p"), Logic::K5).valid);
    CHECK(decide(F("[]p -> <>p"), Logic::KD5).valid);
    CHECK(decide(F("p -> []<>p"), Logic::S5).valid);
    CHECK(decide(F("[]p -> p"), Logic::S5).valid);

    auto res = decide(F("[]p -> p"), Logic::K5);
    REQUIRE_FALSE(res.valid);
    REQUIRE(res.countermodel.has_value());
    CHECK(res.countermodel->worlds.size() == 1);
    CHECK(res.countermodel->relation.empty());
    // p false at the root
    CHECK_FALSE(res.countermodel->atom_true_at("p", res.countermodel->root));
}

TEST_CASE("countermodels read off saturated leaves") {
    LayeredSequent leaf;
    leaf.add(Label::trunk(), F("~p"));
    auto [m, i] = countermodel_from_leaf(leaf, Logic::K5);
    CHECK(m.worlds == std::vector<WorldId>{"@."});
    CHECK(m.valuation["p"].count("@.") == 1);
    CHECK_FALSE(eval(m, "@.", F("~p")));

    LayeredSequent open_but_unsat;
    open_but_unsat.add(Label::trunk(), F("[]p"));
    CHECK_THROWS_AS(countermodel_from_leaf(open_but_unsat, Logic::K5), std::invalid_argument);
}

TEST_CASE("serial logics pad crownless leaves into serial frames") {
    auto res = decide(F("p"), Logic::KD5);
    REQUIRE_FALSE(res.valid);
    CHECK(is_l_frame(*res.countermodel, Logic::KD5));
    auto res45 = decide(F("p"), Logic::KD45);
    REQUIRE_FALSE(res45.valid);
    CHECK(is_l_frame(*res45.countermodel, Logic::KD45));

    // with a diamond around, the witness bracket comes from the d_t rule
    auto dia = decide(F("<>p"), Logic::KD5);
    REQUIRE_FALSE(dia.valid);
    CHECK(is_l_frame(*dia.countermodel, Logic::KD5));
    CHECK(dia.countermodel->worlds.size() == 2);
}

TEST_CASE("S5 and KB5 crown-only countermodels") {
    auto s5 = decide(F("p -> []p"), Logic::S5);
    REQUIRE_FALSE(s5.valid);
    CHECK(is_l_frame(*s5.countermodel, Logic::S5));
    CHECK_FALSE(eval(*s5.countermodel, s5.interpretation->at(s5.start), F("p -> []p")));

    auto kb5 = decide(F("[]p -> p"), Logic::KB5);
    REQUIRE_FALSE(kb5.valid);
    CHECK(is_l_frame(*kb5.countermodel, Logic::KB5));
    CHECK_FALSE(eval(*kb5.countermodel, kb5.interpretation->at(Label::trunk()), F("[]p -> p")));

    // a KB5 refutation that saturates through the crown rules
    auto kb5crown = decide(F("[]p -> [](p & q)"), Logic::KB5);
    REQUIRE_FALSE(kb5crown.valid);
    CHECK(is_l_frame(*kb5crown.countermodel, Logic::KB5));
    CHECK_FALSE(
        eval(*kb5crown.countermodel, kb5crown.interpretation->at(Label::trunk()),
             F("[]p -> [](p & q)")));
}

TEST_CASE("sampled soundness and completeness round trip") {
    auto corpus = k5kit::testing::random_corpus(31337, 60, 8, {"p", "q"});
    for (Logic logic : kAllLogics) {
        auto models = sample_models(logic, 3, {"p", "q"}, 17, 40);
        for (const auto& f : corpus) {
            auto res = decide(f, logic);
            CHECK(res.stats.max_branch_formulas <= res.stats.branch_bound);
            if (res.valid) {
                check_rules_in_set(*res.proof, logic);
                for (const auto& m : models) CHECK(eval(m, m.root, f));
            } else {
                CHECK(is_l_frame(*res.countermodel, logic));
                CHECK_FALSE(eval(*res.countermodel, res.interpretation->at(res.start), f));
            }
        }
    }
}

TEST_CASE("rule applications outside the calculus are rejected") {
    // a hand-built obligation that would need dia_t, which KB5 does not have
    LayeredSequent g;
    g.add(Label::trunk(), F("<>p"));
    g.ensure_component(Label::bracket(1));
    UnsaturatedItem item{Label::trunk(), F("<>p"),
                         {Obligation::Kind::DiaAt, Label::bracket(1)}};
    CHECK_NOTHROW(apply_rule(g, item, Logic::K5));
    CHECK_THROWS_AS(apply_rule(g, item, Logic::KB5), std::logic_error);
}

TEST_CASE("rules are cumulative") {
    // every premise keeps the conclusion's labeled formulas, except the KB5
    // trunk relocation which only regrows the count
    std::mt19937_64 rng(515151);
    auto corpus = k5kit::testing::random_corpus(6161, 25, 7, {"p", "q"});
    for (Logic logic : kAllLogics) {
        for (const auto& f : corpus) {
            LayeredSequent g = initial_sequent(f, logic);
            for (int step = 0; step < 25; ++step) {
                auto items = unsaturated_items(g, logic);
                if (items.empty() || is_closed(g)) break;
                const auto& item = items[rng() % items.size()];
                auto app = apply_rule(g, item, logic);
                for (const auto& premise : app.premises) {
                    CHECK(premise.labeled_formula_count() > g.labeled_formula_count());
                    if (app.rule != RuleId::BoxTPrime)
                        for (const auto& comp : g.components())
                            for (const auto& x : comp.formulas)
                                CHECK(premise.contains(comp.label, x));
                }
                g = app.premises[rng() % app.premises.size()];
            }
        }
    }
}

TEST_CASE("proof traces render") {
    auto res = decide(F("p | ~p"), Logic::K5);
    REQUIRE(res.valid);
    std::string text = proof_to_text(*res.proof);
    CHECK(text.find("or @. : p | ~p") != std::string::npos);
    CHECK(text.find("id_P") != std::string::npos);
    std::string json = proof_to_json(*res.proof);
    CHECK(json.find("\"rule\":\"or\"") != std::string::npos);
    CHECK(json.find("\"premises\"") != std::string::npos);
}
