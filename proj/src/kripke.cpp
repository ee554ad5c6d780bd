#include "k5kit/kripke.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace k5kit {

std::string logic_name(Logic l) {
    switch (l) {
        case Logic::K5: return "k5";
        case Logic::KD5: return "kd5";
        case Logic::K45: return "k45";
        case Logic::KD45: return "kd45";
        case Logic::KB5: return "kb5";
        case Logic::S5: return "s5";
    }
    return "?";
}

std::optional<Logic> logic_from_name(std::string_view name) {
    std::string n(name);
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    for (Logic l : kAllLogics)
        if (logic_name(l) == n) return l;
    return std::nullopt;
}

bool KripkeModel::has_world(const WorldId& w) const {
    return std::find(worlds.begin(), worlds.end(), w) != worlds.end();
}

std::vector<WorldId> KripkeModel::successors(const WorldId& w) const {
    std::vector<WorldId> out;
    auto it = relation.lower_bound({w, std::string()});
    for (; it != relation.end() && it->first == w; ++it) out.push_back(it->second);
    return out;
}

bool KripkeModel::atom_true_at(const std::string& atom, const WorldId& w) const {
    auto it = valuation.find(atom);
    return it != valuation.end() && it->second.count(w) > 0;
}

void KripkeModel::validate() const {
    if (worlds.empty()) throw std::invalid_argument("model has no worlds");
    if (!has_world(root)) throw std::invalid_argument("root is not a listed world: " + root);
    std::set<WorldId> ws(worlds.begin(), worlds.end());
    if (ws.size() != worlds.size()) throw std::invalid_argument("duplicate world ids");
    for (const auto& [a, b] : relation)
        if (!ws.count(a) || !ws.count(b))
            throw std::invalid_argument("relation mentions unknown world");
    for (const auto& [atom, set] : valuation)
        for (const auto& w : set)
            if (!ws.count(w)) throw std::invalid_argument("valuation mentions unknown world: " + w);
}

bool eval(const KripkeModel& m, const WorldId& w, const Formula& f) {
    if (!m.has_world(w)) throw std::invalid_argument("unknown world: " + w);
    switch (f.kind()) {
        case Conn::Top:
            return true;
        case Conn::Bottom:
            return false;
        case Conn::Lit: {
            bool v = m.atom_true_at(f.literal().atom, w);
            return f.literal().negated ? !v : v;
        }
        case Conn::And:
            return eval(m, w, f.lhs()) && eval(m, w, f.rhs());
        case Conn::Or:
            return eval(m, w, f.lhs()) || eval(m, w, f.rhs());
        case Conn::Box: {
            for (const auto& v : m.successors(w))
                if (!eval(m, v, f.child())) return false;
            return true;
        }
        case Conn::Dia: {
            for (const auto& v : m.successors(w))
                if (eval(m, v, f.child())) return true;
            return false;
        }
    }
    return false;
}

std::optional<FrameShape> classify_frame(const KripkeModel& m) {
    if (m.worlds.empty() || !m.has_world(m.root)) return std::nullopt;

    auto total_on = [&](const std::vector<WorldId>& ws) {
        for (const auto& a : ws)
            for (const auto& b : ws)
                if (!m.related(a, b)) return false;
        return true;
    };

    if (total_on(m.worlds)) {
        FrameShape s;
        s.total = true;
        s.cluster = m.worlds;
        return s;
    }

    // Root outside the cluster: irreflexive, no edges back into it, cluster
    // total, root edges only into the cluster.
    if (m.related(m.root, m.root)) return std::nullopt;
    FrameShape s;
    for (const auto& w : m.worlds)
        if (w != m.root) s.cluster.push_back(w);
    if (!total_on(s.cluster)) return std::nullopt;
    for (const auto& c : s.cluster)
        if (m.related(c, m.root)) return std::nullopt;
    for (const auto& c : s.cluster)
        if (m.related(m.root, c)) s.root_edges.push_back(c);
    return s;
}

bool is_l_frame(const KripkeModel& m, Logic logic) {
    auto shape = classify_frame(m);
    if (!shape) return false;
    if (shape->total) return true;  // a total cluster fits every row

    bool singleton = shape->cluster.empty();
    size_t seen = shape->root_edges.size();
    size_t cluster = shape->cluster.size();
    switch (logic) {
        case Logic::K5:
            return true;
        case Logic::KD5:
            // seriality: the crown exists and the root reaches it
            return cluster >= 1 && seen >= 1;
        case Logic::K45:
            return singleton || seen == cluster;
        case Logic::KD45:
            return cluster >= 1 && seen == cluster;
        case Logic::KB5:
            return singleton;
        case Logic::S5:
            return false;
    }
    return false;
}

namespace {

// Deterministic across standard libraries, unlike uniform_int_distribution.
uint64_t pick(std::mt19937_64& rng, uint64_t n) { return n == 0 ? 0 : rng() % n; }

}  // namespace

std::vector<KripkeModel> sample_models(Logic logic, int max_cluster,
                                       const std::vector<std::string>& atoms, uint64_t seed,
                                       int count) {
    bool needs_cluster = logic == Logic::KD5 || logic == Logic::KD45 || logic == Logic::S5;
    if (needs_cluster && max_cluster < 1)
        throw std::invalid_argument("max_cluster must be >= 1 for " + logic_name(logic));
    if (max_cluster < 0) throw std::invalid_argument("max_cluster must be >= 0");

    std::vector<int> sizes;
    for (int cs = needs_cluster ? 1 : 0; cs <= max_cluster; ++cs) sizes.push_back(cs);

    std::mt19937_64 rng(seed);
    std::vector<KripkeModel> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        int cs = sizes[i % sizes.size()];
        KripkeModel m;
        bool crowned_shape = logic == Logic::KB5 || logic == Logic::S5;
        if (crowned_shape) {
            if (cs == 0) {
                m.worlds = {"w0"};
                m.root = "w0";
            } else {
                // the whole model is one cluster; the root sits inside it
                for (int k = 0; k < cs; ++k) m.worlds.push_back("w" + std::to_string(k));
                m.root = m.worlds.front();
                for (const auto& a : m.worlds)
                    for (const auto& b : m.worlds) m.relation.insert({a, b});
            }
        } else {
            m.worlds = {"r"};
            m.root = "r";
            std::vector<WorldId> cluster;
            for (int k = 0; k < cs; ++k) cluster.push_back("c" + std::to_string(k));
            m.worlds.insert(m.worlds.end(), cluster.begin(), cluster.end());
            for (const auto& a : cluster)
                for (const auto& b : cluster) m.relation.insert({a, b});
            if (!cluster.empty()) {
                if (logic == Logic::K45 || logic == Logic::KD45) {
                    for (const auto& c : cluster) m.relation.insert({m.root, c});
                } else {
                    // K5/KD5: random subset; KD5 additionally needs it nonempty
                    std::vector<WorldId> chosen;
                    for (const auto& c : cluster)
                        if (pick(rng, 2) == 1) chosen.push_back(c);
                    if (logic == Logic::KD5 && chosen.empty())
                        chosen.push_back(cluster[pick(rng, cluster.size())]);
                    for (const auto& c : chosen) m.relation.insert({m.root, c});
                }
            }
        }
        for (const auto& atom : atoms) {
            auto& set = m.valuation[atom];
            for (const auto& w : m.worlds)
                if (pick(rng, 2) == 1) set.insert(w);
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::string model_to_json(const KripkeModel& m) {
    nlohmann::json j;
    j["worlds"] = m.worlds;
    j["root"] = m.root;
    auto rel = nlohmann::json::array();
    for (const auto& [a, b] : m.relation) rel.push_back({a, b});  // set order = lexicographic
    j["relation"] = rel;
    auto val = nlohmann::json::object();
    for (const auto& [atom, set] : m.valuation)
        val[atom] = std::vector<WorldId>(set.begin(), set.end());
    j["valuation"] = val;
    return j.dump();
}

KripkeModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    KripkeModel m;
    m.worlds = j.at("worlds").get<std::vector<WorldId>>();
    m.root = j.at("root").get<WorldId>();
    for (const auto& pair : j.at("relation")) {
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("relation entries must be pairs");
        m.relation.insert({pair[0].get<WorldId>(), pair[1].get<WorldId>()});
    }
    if (j.contains("valuation"))
        for (auto it = j["valuation"].begin(); it != j["valuation"].end(); ++it) {
            auto& set = m.valuation[it.key()];
            for (const auto& w : it.value()) set.insert(w.get<WorldId>());
        }
    m.validate();
    return m;
}

}  // namespace k5kit
