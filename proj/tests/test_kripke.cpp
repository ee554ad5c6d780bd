#include "doctest.h"

#include <random>

#include "k5kit/kripke.hpp"
#include "k5kit/verification.hpp"
#include "support.hpp"

using namespace k5kit;
using k5kit::testing::F;

namespace {

KripkeModel singleton_irreflexive() {
    KripkeModel m;
    m.worlds = {"w"};
    m.root = "w";
    return m;
}

KripkeModel root_and_cluster(const std::vector<WorldId>& cluster,
                             const std::vector<WorldId>& seen) {
    KripkeModel m;
    m.worlds = {"r"};
    m.worlds.insert(m.worlds.end(), cluster.begin(), cluster.end());
    m.root = "r";
    for (const auto& a : cluster)
        for (const auto& b : cluster) m.relation.insert({a, b});
    for (const auto& c : seen) m.relation.insert({"r", c});
    return m;
}

}  // namespace

TEST_CASE("evaluation on the degenerate and hand-built models") {
    auto m = singleton_irreflexive();
    CHECK(eval(m, "w", Formula::box(Formula::bottom())));
    CHECK_FALSE(eval(m, "w", Formula::dia(Formula::top())));

    // root sees only a; cluster {a, b}; p true at a only
    auto m2 = root_and_cluster({"a", "b"}, {"a"});
    m2.valuation["p"] = {"a"};
    CHECK(eval(m2, "r", F("[]p")));
    CHECK_FALSE(eval(m2, "r", F("[][]p")));

    CHECK_THROWS_AS(eval(m, "nope", Formula::top()), std::invalid_argument);
}

TEST_CASE("frame membership follows the per-logic shapes") {
    auto singleton = singleton_irreflexive();
    CHECK(is_l_frame(singleton, Logic::K5));
    CHECK_FALSE(is_l_frame(singleton, Logic::KD5));
    CHECK(is_l_frame(singleton, Logic::K45));
    CHECK_FALSE(is_l_frame(singleton, Logic::KD45));
    CHECK(is_l_frame(singleton, Logic::KB5));
    CHECK_FALSE(is_l_frame(singleton, Logic::S5));

    KripkeModel total2;  // 2-world cluster containing the root
    total2.worlds = {"a", "b"};
    total2.root = "a";
    for (const auto& x : total2.worlds)
        for (const auto& y : total2.worlds) total2.relation.insert({x, y});
    for (Logic l : kAllLogics) CHECK(is_l_frame(total2, l));

    auto partial = root_and_cluster({"a", "b"}, {"a"});
    CHECK(is_l_frame(partial, Logic::K5));
    CHECK(is_l_frame(partial, Logic::KD5));
    CHECK_FALSE(is_l_frame(partial, Logic::K45));
    CHECK_FALSE(is_l_frame(partial, Logic::KD45));
    CHECK_FALSE(is_l_frame(partial, Logic::KB5));
    CHECK_FALSE(is_l_frame(partial, Logic::S5));

    auto disconnected = root_and_cluster({"a"}, {});
    CHECK(is_l_frame(disconnected, Logic::K5));
    CHECK_FALSE(is_l_frame(disconnected, Logic::KD5));  // root has no successor

    auto full = root_and_cluster({"a", "b"}, {"a", "b"});
    CHECK(is_l_frame(full, Logic::K45));
    CHECK(is_l_frame(full, Logic::KD45));

    KripkeModel crown_to_root = root_and_cluster({"a"}, {"a"});
    crown_to_root.relation.insert({"a", "r"});
    CHECK_FALSE(is_l_frame(crown_to_root, Logic::K5));
}

TEST_CASE("sampling produces valid frames deterministically") {
    auto s5 = sample_models(Logic::S5, 1, {"p"}, 3, 1);
    REQUIRE(s5.size() == 1);
    CHECK(s5[0].worlds.size() == 1);
    CHECK(s5[0].related(s5[0].root, s5[0].root));

    auto k5 = sample_models(Logic::K5, 0, {"p"}, 9, 1);
    REQUIRE(k5.size() == 1);
    CHECK(k5[0].worlds.size() == 1);
    CHECK(k5[0].relation.empty());

    auto kd45 = sample_models(Logic::KD45, 2, {"p", "q"}, 7, 5);
    REQUIRE(kd45.size() == 5);
    for (const auto& m : kd45) {
        CHECK(is_l_frame(m, Logic::KD45));
        auto shape = classify_frame(m);
        REQUIRE(shape.has_value());
        if (!shape->total) CHECK(shape->root_edges.size() == shape->cluster.size());
    }

    for (Logic l : kAllLogics) {
        auto models = sample_models(l, 3, {"p", "q"}, 42, 40);
        for (const auto& m : models) {
            m.validate();
            CHECK(is_l_frame(m, l));
        }
        // deterministic under the seed
        auto again = sample_models(l, 3, {"p", "q"}, 42, 40);
        for (size_t i = 0; i < models.size(); ++i)
            CHECK(model_to_json(models[i]) == model_to_json(again[i]));
    }

    CHECK_THROWS_AS(sample_models(Logic::S5, 0, {"p"}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_models(Logic::KD5, 0, {"p"}, 0, 1), std::invalid_argument);
}

TEST_CASE("classical duality under evaluation") {
    auto corpus = k5kit::testing::random_corpus(77, 60, 8, {"p", "q"});
    for (Logic l : kAllLogics) {
        auto models = sample_models(l, 2, {"p", "q"}, 5, 10);
        for (const auto& m : models)
            for (const auto& f : corpus)
                for (const auto& w : m.worlds) CHECK(eval(m, w, negate(f)) == !eval(m, w, f));
    }
}

TEST_CASE("model JSON round trips with fixed keys and sorted relation") {
    auto m = root_and_cluster({"a", "b"}, {"b"});
    m.valuation["p"] = {"a", "r"};
    std::string json = model_to_json(m);
    CHECK(json.find("\"worlds\"") != std::string::npos);
    CHECK(json.find("\"root\"") != std::string::npos);
    CHECK(json.find("\"relation\"") != std::string::npos);
    CHECK(json.find("\"valuation\"") != std::string::npos);
    // lexicographic pair order: (a,a) < (a,b) < (b,a) < (b,b) < (r,b)
    CHECK(json.find("[\"a\",\"a\"]") < json.find("[\"a\",\"b\"]"));
    CHECK(json.find("[\"b\",\"b\"]") < json.find("[\"r\",\"b\"]"));

    KripkeModel back = model_from_json(json);
    CHECK(back.worlds == m.worlds);
    CHECK(back.root == m.root);
    CHECK(back.relation == m.relation);
    CHECK(back.valuation == m.valuation);

    CHECK_THROWS(model_from_json(R"({"worlds":["a"],"root":"zzz","relation":[]})"));
}
