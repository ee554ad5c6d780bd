#include "k5kit/verification.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "k5kit/prover.hpp"

namespace k5kit {

namespace {

std::set<std::string> model_atoms(const KripkeModel& a, const KripkeModel& b) {
    std::set<std::string> atoms;
    for (const auto& [p, _] : a.valuation) atoms.insert(p);
    for (const auto& [p, _] : b.valuation) atoms.insert(p);
    return atoms;
}

bool literal_true_at(const KripkeModel& m, const WorldId& w, const Literal& l) {
    bool v = m.atom_true_at(l.atom, w);
    return l.negated ? !v : v;
}

bool literals_clause(const KripkeModel& m, const KripkeModel& mp, const WorldId& w,
                     const WorldId& wp, BisimWitness::Mode mode,
                     const std::optional<Literal>& lit, const std::set<std::string>& atoms) {
    for (const auto& p : atoms) {
        if (mode == BisimWitness::Mode::Literal && lit && p == lit->atom) continue;
        if (m.atom_true_at(p, w) != mp.atom_true_at(p, wp)) return false;
    }
    if (mode == BisimWitness::Mode::Literal && lit) {
        // truth of the literal may only be lost, never gained
        if (literal_true_at(mp, wp, *lit) && !literal_true_at(m, w, *lit)) return false;
    }
    return true;
}

}  // namespace

bool check_bisim(const KripkeModel& m, const KripkeModel& mp, const BisimWitness& z) {
    if (z.pairs.empty()) return false;
    if (z.mode == BisimWitness::Mode::Literal && !z.lit)
        throw std::invalid_argument("literal mode requires a literal");
    for (const auto& [w, wp] : z.pairs) {
        if (!m.has_world(w)) throw std::invalid_argument("unknown world in witness: " + w);
        if (!mp.has_world(wp)) throw std::invalid_argument("unknown world in witness: " + wp);
    }
    auto atoms = model_atoms(m, mp);
    auto related = [&](const WorldId& a, const WorldId& b) { return z.pairs.count({a, b}) > 0; };

    for (const auto& [w, wp] : z.pairs) {
        if (!literals_clause(m, mp, w, wp, z.mode, z.lit, atoms)) return false;
        for (const auto& v : m.successors(w)) {  // forth
            bool ok = false;
            for (const auto& vp : mp.successors(wp))
                if (related(v, vp)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        for (const auto& vp : mp.successors(wp)) {  // back
            bool ok = false;
            for (const auto& v : m.successors(w))
                if (related(v, vp)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
    }
    return true;
}

std::optional<BisimWitness> find_bisim(const KripkeModel& m, const WorldId& w,
                                       const KripkeModel& mp, const WorldId& wp,
                                       BisimWitness::Mode mode, std::optional<Literal> lit) {
    if (!m.has_world(w) || !mp.has_world(wp)) return std::nullopt;
    auto atoms = model_atoms(m, mp);

    std::set<std::pair<WorldId, WorldId>> pairs;
    for (const auto& a : m.worlds)
        for (const auto& b : mp.worlds)
            if (literals_clause(m, mp, a, b, mode, lit, atoms)) pairs.insert({a, b});

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = pairs.begin(); it != pairs.end();) {
            const auto& [a, b] = *it;
            bool ok = true;
            for (const auto& v : m.successors(a)) {
                bool found = false;
                for (const auto& vp : mp.successors(b))
                    if (pairs.count({v, vp})) {
                        found = true;
                        break;
                    }
                if (!found) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                for (const auto& vp : mp.successors(b)) {
                    bool found = false;
                    for (const auto& v : m.successors(a))
                        if (pairs.count({v, vp})) {
                            found = true;
                            break;
                        }
                    if (!found) {
                        ok = false;
                        break;
                    }
                }
            if (!ok) {
                it = pairs.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }

    if (!pairs.count({w, wp})) return std::nullopt;
    BisimWitness z{mode, std::move(lit), std::move(pairs)};
    return z;
}

CopyResult copy_world(const KripkeModel& m, const WorldId& w, bool away_from_root) {
    auto shape = classify_frame(m);
    if (!shape) throw std::invalid_argument("model is not a K5 frame");
    const auto& cluster = shape->cluster;
    if (std::find(cluster.begin(), cluster.end(), w) == cluster.end())
        throw std::invalid_argument("world is not in the cluster: " + w);
    if (away_from_root && shape->total)
        throw std::invalid_argument(
            "cannot copy away from a root that belongs to the cluster");

    WorldId copy = w + "_c";
    for (int i = 2; m.has_world(copy); ++i) copy = w + "_c" + std::to_string(i);

    CopyResult out;
    out.copy = copy;
    out.model = m;
    out.model.worlds.push_back(copy);
    for (const auto& c : cluster) {
        out.model.relation.insert({copy, c});
        out.model.relation.insert({c, copy});
    }
    out.model.relation.insert({copy, copy});
    if (m.related(m.root, w)) out.model.relation.insert({m.root, copy});
    if (away_from_root) out.model.relation.erase({m.root, copy});
    for (auto& [atom, set] : out.model.valuation)
        if (set.count(w)) set.insert(copy);

    if (!is_l_frame(out.model, Logic::K5))
        throw std::logic_error("copying broke the K5 frame shape");
    return out;
}

// ---------------------------------------------------------------------------
// Formula sampling

namespace {

uint64_t pick(std::mt19937_64& rng, uint64_t n) { return n == 0 ? 0 : rng() % n; }

Formula random_leaf(std::mt19937_64& rng, const std::vector<Literal>& leaves,
                    bool allow_constants) {
    size_t extra = allow_constants ? 2 : 0;
    // constants stay rare so random formulas do not collapse
    size_t weight = leaves.size() * 4;
    size_t idx = pick(rng, weight + extra);
    if (idx < weight) return Formula::lit(leaves[idx % leaves.size()]);
    return idx == weight ? Formula::top() : Formula::bottom();
}

}  // namespace

Formula random_formula(std::mt19937_64& rng, int connectives, const std::vector<Literal>& leaves,
                       bool allow_constants) {
    if (leaves.empty() && !allow_constants)
        throw std::invalid_argument("empty leaf pool");
    if (connectives <= 0 || leaves.empty()) {
        if (leaves.empty()) return pick(rng, 2) ? Formula::top() : Formula::bottom();
        return random_leaf(rng, leaves, allow_constants);
    }
    switch (pick(rng, 4)) {
        case 0:
            return Formula::box(random_formula(rng, connectives - 1, leaves, allow_constants));
        case 1:
            return Formula::dia(random_formula(rng, connectives - 1, leaves, allow_constants));
        case 2: {
            int left = static_cast<int>(pick(rng, connectives));
            return Formula::conj(random_formula(rng, left, leaves, allow_constants),
                                 random_formula(rng, connectives - 1 - left, leaves,
                                                allow_constants));
        }
        default: {
            int left = static_cast<int>(pick(rng, connectives));
            return Formula::disj(random_formula(rng, left, leaves, allow_constants),
                                 random_formula(rng, connectives - 1 - left, leaves,
                                                allow_constants));
        }
    }
}

std::vector<Formula> enumerate_formulas(int max_connectives, const std::vector<Literal>& leaves) {
    std::vector<std::vector<Formula>> by_count(max_connectives + 1);
    for (const auto& l : leaves) by_count[0].push_back(Formula::lit(l));
    by_count[0].push_back(Formula::top());
    by_count[0].push_back(Formula::bottom());
    for (int c = 1; c <= max_connectives; ++c) {
        for (const auto& f : by_count[c - 1]) {
            by_count[c].push_back(Formula::box(f));
            by_count[c].push_back(Formula::dia(f));
        }
        for (int i = 0; i <= c - 1; ++i)
            for (const auto& a : by_count[i])
                for (const auto& b : by_count[c - 1 - i]) {
                    by_count[c].push_back(Formula::conj(a, b));
                    by_count[c].push_back(Formula::disj(a, b));
                }
    }
    std::vector<Formula> out;
    for (auto& bucket : by_count)
        for (auto& f : bucket) out.push_back(std::move(f));
    return out;
}

// ---------------------------------------------------------------------------
// Interpolant conditions

UlipReport check_ulip(const Formula& phi, const Literal& ell, const Formula& interp,
                      const UlipConfig& cfg) {
    UlipReport report;

    auto allowed = literals(phi);
    allowed.erase(ell);
    if (cfg.both_polarities) allowed.erase(ell.negate());
    report.clause_i = true;
    for (const auto& l : literals(interp))
        if (!allowed.count(l)) report.clause_i = false;

    report.clause_ii = decide(Formula::disj(negate(interp), phi), Logic::K5).valid;

    // psi corpus: every small formula over the remaining literals plus a
    // fresh atom, then seeded random ones over the same pool (the negation
    // of the literal stays fair game unless both polarities are banned)
    std::vector<Literal> exhaustive_pool;
    for (const auto& l : allowed)
        if (!(l == ell) && !(l == ell.negate())) exhaustive_pool.push_back(l);
    exhaustive_pool.push_back(Literal(cfg.fresh_atom, false));

    std::vector<Literal> random_pool = exhaustive_pool;
    random_pool.push_back(Literal(cfg.fresh_atom, true));
    if (!cfg.both_polarities && !(ell.negate() == ell)) {
        bool have = false;
        for (const auto& l : random_pool)
            if (l == ell.negate()) have = true;
        if (!have) random_pool.push_back(ell.negate());
    }

    std::vector<Formula> psis = enumerate_formulas(cfg.exhaustive_connectives, exhaustive_pool);
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < cfg.random_count; ++i) {
        int c = static_cast<int>(rng() % (cfg.random_connectives + 1));
        psis.push_back(random_formula(rng, c, random_pool));
    }
    report.checked = psis.size();

    auto run_range = [&](size_t lo, size_t hi, std::vector<std::string>& out) {
        for (size_t i = lo; i < hi; ++i) {
            const Formula& psi = psis[i];
            if (!decide(Formula::disj(negate(psi), phi), Logic::K5).valid) continue;
            if (!decide(Formula::disj(negate(psi), interp), Logic::K5).valid)
                out.push_back(psi.str());
        }
    };

    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || psis.size() < 64) {
        run_range(0, psis.size(), report.failures);
    } else {
        std::vector<std::vector<std::string>> found(jobs);
        std::vector<std::thread> threads;
        size_t chunk = (psis.size() + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            size_t lo = j * chunk, hi = std::min(psis.size(), lo + chunk);
            if (lo >= hi) break;
            threads.emplace_back([&, lo, hi, j] { run_range(lo, hi, found[j]); });
        }
        for (auto& t : threads) t.join();
        for (auto& part : found)
            for (auto& s : part) report.failures.push_back(std::move(s));
    }
    return report;
}

std::string UlipReport::to_json() const {
    nlohmann::json j;
    j["clause_i"] = clause_i;
    j["clause_ii"] = clause_ii;
    j["clause_iii"] = {{"checked", checked}, {"failures", failures}};
    return j.dump();
}

}  // namespace k5kit
