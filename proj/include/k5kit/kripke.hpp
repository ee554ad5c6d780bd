#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "k5kit/formula.hpp"

namespace k5kit {

/// The six logics, in their fixed iteration order.
enum class Logic : uint8_t { K5, KD5, K45, KD45, KB5, S5 };

constexpr Logic kAllLogics[] = {Logic::K5,   Logic::KD5, Logic::K45,
                                Logic::KD45, Logic::KB5, Logic::S5};

std::string logic_name(Logic l);
std::optional<Logic> logic_from_name(std::string_view name);

using WorldId = std::string;

/// Finite pointed Kripke model. The frame shapes handled here are a root
/// plus at most one cluster; the cluster is derived from the relation,
/// never stored.
struct KripkeModel {
    std::vector<WorldId> worlds;  // ordered, duplicate-free
    WorldId root;
    std::set<std::pair<WorldId, WorldId>> relation;
    std::map<std::string, std::set<WorldId>> valuation;

    bool has_world(const WorldId& w) const;
    bool related(const WorldId& a, const WorldId& b) const {
        return relation.count({a, b}) > 0;
    }
    std::vector<WorldId> successors(const WorldId& w) const;
    bool atom_true_at(const std::string& atom, const WorldId& w) const;

    /// Structural sanity: root listed, relation and valuation over worlds.
    void validate() const;
};

/// Truth at a world, by the usual satisfaction clauses. A negative literal
/// ~p is true iff w is not in V(p). Throws on an unknown world.
bool eval(const KripkeModel& m, const WorldId& w, const Formula& f);

/// Whether (worlds, relation) has the exact frame shape the logic calls for:
/// a lone irreflexive root, a total cluster covering every world, or a root
/// wired to a total cluster it does not belong to.
bool is_l_frame(const KripkeModel& m, Logic logic);

/// Decomposition used by frame checks and world copying.
struct FrameShape {
    bool total = false;          // every pair related (root inside the cluster)
    std::vector<WorldId> cluster;  // non-root worlds, or all worlds when total
    std::vector<WorldId> root_edges;
};
std::optional<FrameShape> classify_frame(const KripkeModel& m);

/// Deterministic model sampler for oracle tests: every result satisfies
/// is_l_frame for the logic. Cluster sizes cycle through the allowed range;
/// root edges and valuations are drawn from the seed.
std::vector<KripkeModel> sample_models(Logic logic, int max_cluster,
                                       const std::vector<std::string>& atoms, uint64_t seed,
                                       int count);

std::string model_to_json(const KripkeModel& m);
KripkeModel model_from_json(const std::string& text);

}  // namespace k5kit
