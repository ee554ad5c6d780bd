#include "doctest.h"

#include <random>

#include "k5kit/interpolation.hpp"
#include "k5kit/multiformula.hpp"
#include "k5kit/verification.hpp"
#include "support.hpp"

using namespace k5kit;
using k5kit::testing::F;

namespace {

KripkeModel singleton(bool p_true) {
    KripkeModel m;
    m.worlds = {"w"};
    m.root = "w";
    if (p_true) m.valuation["p"] = {"w"};
    return m;
}

}  // namespace

TEST_CASE("witness checking on small models") {
    auto m = singleton(true);
    CHECK(check_bisim(m, m, BisimWitness::full({{"w", "w"}})));

    auto with_p = singleton(true), without_p = singleton(false);
    // p may be lost from the first model to the second, not gained
    CHECK(check_bisim(with_p, without_p,
                      BisimWitness::literal(Literal("p", false), {{"w", "w"}})));
    CHECK_FALSE(check_bisim(without_p, with_p,
                            BisimWitness::literal(Literal("p", false), {{"w", "w"}})));
    CHECK_FALSE(check_bisim(with_p, without_p, BisimWitness::full({{"w", "w"}})));
    CHECK_FALSE(check_bisim(m, m, BisimWitness::full({})));
    CHECK_THROWS_AS(check_bisim(m, m, BisimWitness::full({{"w", "nope"}})),
                    std::invalid_argument);
}

TEST_CASE("witness search by fixpoint refinement") {
    auto models = sample_models(Logic::K5, 3, {"p", "q"}, 12, 10);
    for (const auto& m : models) {
        auto z = find_bisim(m, m.root, m, m.root, BisimWitness::Mode::Full);
        REQUIRE(z.has_value());
        CHECK(z->pairs.count({m.root, m.root}));
        CHECK(check_bisim(m, m, *z));
    }
    CHECK_FALSE(find_bisim(singleton(true), "w", singleton(false), "w",
                           BisimWitness::Mode::Full)
                    .has_value());
}

TEST_CASE("copying a cluster world") {
    KripkeModel m;
    m.worlds = {"r", "a"};
    m.root = "r";
    m.relation = {{"r", "a"}, {"a", "a"}};
    m.valuation["p"] = {"a"};

    auto plain = copy_world(m, "a", false);
    CHECK(plain.copy == "a_c");
    // recompute the expected relation directly from the definition
    std::set<std::pair<WorldId, WorldId>> expected = {
        {"r", "a"}, {"a", "a"},                        // original
        {"a_c", "a"}, {"a", "a_c"}, {"a_c", "a_c"},    // joins the cluster
        {"r", "a_c"},                                  // inherited root edge
    };
    CHECK(plain.model.relation == expected);
    CHECK(plain.model.valuation["p"].count("a_c") == 1);
    CHECK(is_l_frame(plain.model, Logic::K5));

    auto away = copy_world(m, "a", true);
    expected.erase({"r", "a_c"});
    CHECK(away.model.relation == expected);
    CHECK(is_l_frame(away.model, Logic::K5));

    // the copy lemma: identity plus the copied pair is a full bisimulation
    for (bool away_flag : {false, true}) {
        auto res = copy_world(m, "a", away_flag);
        auto z = find_bisim(m, "a", res.model, res.copy, BisimWitness::Mode::Full);
        REQUIRE(z.has_value());
        for (const auto& w : m.worlds) CHECK(z->pairs.count({w, w}));
        CHECK(check_bisim(m, res.model, *z));
    }

    CHECK_THROWS_AS(copy_world(m, "r", false), std::invalid_argument);

    KripkeModel total;
    total.worlds = {"a", "b"};
    total.root = "a";
    for (const std::string& x : {"a", "b"})
        for (const std::string& y : {"a", "b"}) total.relation.insert({x, y});
    CHECK_NOTHROW(copy_world(total, "a", false));
    CHECK_THROWS_AS(copy_world(total, "a", true), std::invalid_argument);
}

TEST_CASE("reversing a literal witness flips the literal") {
    auto models = sample_models(Logic::K5, 2, {"p", "q"}, 77, 8);
    Literal p("p", false);
    for (const auto& m : models)
        for (const auto& m2 : models) {
            auto z = find_bisim(m, m.root, m2, m2.root, BisimWitness::Mode::Literal, p);
            if (!z) continue;
            std::set<std::pair<WorldId, WorldId>> reversed;
            for (const auto& [a, b] : z->pairs) reversed.insert({b, a});
            CHECK(check_bisim(m2, m, BisimWitness::literal(p.negate(), reversed)));
        }
}

TEST_CASE("modal equivalence transfers along witnesses") {
    // sequent truth moves forward along literal witnesses when the literal
    // does not occur; with full witnesses it is preserved both ways
    std::mt19937_64 rng(99);
    auto pool = k5kit::testing::literal_pool({"q"});  // keep p out of the sequents
    auto models = sample_models(Logic::K5, 2, {"p", "q"}, 31, 8);
    Literal p("p", false);

    int forward_checked = 0, full_checked = 0;
    for (const auto& m : models)
        for (const auto& m2 : models) {
            LayeredSequent g;
            g.add(Label::trunk(), random_formula(rng, 3, pool));
            g.add(Label::trunk(), random_formula(rng, 2, pool));
            auto u = sequent_as_multiformula(g);

            auto zl = find_bisim(m, m.root, m2, m2.root, BisimWitness::Mode::Literal, p);
            if (zl) {
                auto i = Interpretation::checked(m, {{Label::trunk(), m.root}});
                auto i2 = Interpretation::checked(m2, {{Label::trunk(), m2.root}});
                if (eval_multi(m, i, u)) CHECK(eval_multi(m2, i2, u));
                forward_checked++;
            }
            auto zf = find_bisim(m, m.root, m2, m2.root, BisimWitness::Mode::Full);
            if (zf) {
                auto i = Interpretation::checked(m, {{Label::trunk(), m.root}});
                auto i2 = Interpretation::checked(m2, {{Label::trunk(), m2.root}});
                CHECK(eval_multi(m, i, u) == eval_multi(m2, i2, u));
                full_checked++;
            }
        }
    CHECK(forward_checked > 0);
}

TEST_CASE("sequent truth transfers along pointwise-related interpretations") {
    // interpretations over trunk and one bracket, related pointwise by a
    // one-literal witness; sequents avoid that literal entirely
    std::mt19937_64 rng(1234);
    auto pool = k5kit::testing::literal_pool({"q"});
    auto models = sample_models(Logic::K5, 2, {"p", "q"}, 555, 10);
    // copies are bisimilar by construction, so related pairs always exist
    for (size_t i = 0, n = models.size(); i < n; ++i) {
        auto shape = classify_frame(models[i]);
        if (shape && !shape->cluster.empty())
            models.push_back(copy_world(models[i], shape->cluster.front(), false).model);
    }
    Literal p("p", false);
    std::vector<Label> labels = {Label::trunk(), Label::bracket(1)};

    int checked = 0;
    for (const auto& m : models)
        for (const auto& m2 : models) {
            auto z = find_bisim(m, m.root, m2, m2.root, BisimWitness::Mode::Literal, p);
            if (!z) continue;
            LayeredSequent g;
            g.add(Label::trunk(), random_formula(rng, 3, pool));
            g.add(Label::bracket(1), random_formula(rng, 3, pool));
            auto u = sequent_as_multiformula(g);
            for (const auto& i : k5kit::testing::enumerate_interpretations(m, labels))
                for (const auto& i2 : k5kit::testing::enumerate_interpretations(m2, labels)) {
                    bool pointwise = true;
                    for (const auto& l : labels)
                        if (!z->pairs.count({i.at(l), i2.at(l)})) pointwise = false;
                    if (!pointwise) continue;
                    if (eval_multi(m, i, u)) CHECK(eval_multi(m2, i2, u));
                    checked++;
                }
        }
    CHECK(checked > 20);
}

TEST_CASE("interpolant condition reports") {
    UlipConfig cheap;
    cheap.exhaustive_connectives = 2;
    cheap.random_count = 40;

    auto good = check_ulip(F("~p | <><>(p|q)"), Literal("p", false), F("~p | <><>q"), cheap);
    CHECK(good.pass());
    CHECK(good.clause_i);
    CHECK(good.clause_ii);
    CHECK(good.failures.empty());

    auto bot = check_ulip(F("p"), Literal("p", false), Formula::bottom(), cheap);
    CHECK(bot.pass());

    auto top = check_ulip(F("p"), Literal("p", false), Formula::top(), cheap);
    CHECK_FALSE(top.pass());
    CHECK_FALSE(top.clause_ii);  // T -> p is not valid

    // a candidate stronger than the strongest consequence fails clause iii
    auto strong = check_ulip(F("q"), Literal("p", false), Formula::bottom(), cheap);
    CHECK(strong.clause_i);
    CHECK(strong.clause_ii);
    CHECK_FALSE(strong.failures.empty());
    CHECK_FALSE(strong.pass());

    std::string json = good.to_json();
    CHECK(json.find("\"clause_i\":true") != std::string::npos);
    CHECK(json.find("\"clause_iii\"") != std::string::npos);
    CHECK(json.find("\"checked\"") != std::string::npos);
}

TEST_CASE("parallel psi checking matches serial") {
    UlipConfig serial;
    serial.exhaustive_connectives = 2;
    serial.random_count = 50;
    UlipConfig parallel = serial;
    parallel.jobs = 4;
    auto a = check_ulip(F("~p | <>q"), Literal("p", false), F("~p | <>q"), serial);
    auto b = check_ulip(F("~p | <>q"), Literal("p", false), F("~p | <>q"), parallel);
    CHECK(a.pass() == b.pass());
    CHECK(a.checked == b.checked);
    CHECK(a.failures == b.failures);
}
