#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "k5kit/formula.hpp"
#include "k5kit/kripke.hpp"

namespace k5kit {

/// Relation between two models' worlds, claimed to be a bisimulation.
/// In literal mode, atom agreement is relaxed at one literal: its truth may
/// only be lost going from the first model to the second.
struct BisimWitness {
    enum class Mode : uint8_t { Full, Literal };
    Mode mode = Mode::Full;
    std::optional<Literal> lit;  // Literal mode only
    std::set<std::pair<WorldId, WorldId>> pairs;  // (world of m, world of mp)

    static BisimWitness full(std::set<std::pair<WorldId, WorldId>> pairs) {
        return {Mode::Full, std::nullopt, std::move(pairs)};
    }
    static BisimWitness literal(Literal l, std::set<std::pair<WorldId, WorldId>> pairs) {
        return {Mode::Literal, std::move(l), std::move(pairs)};
    }
};

/// Checks every pair against the literal/forth/back clauses.
/// Throws on world ids that are not in the models.
bool check_bisim(const KripkeModel& m, const KripkeModel& mp, const BisimWitness& z);

/// Greatest-fixpoint search over the full world product; returns a witness
/// containing (w, wp) iff one exists.
std::optional<BisimWitness> find_bisim(const KripkeModel& m, const WorldId& w,
                                       const KripkeModel& mp, const WorldId& wp,
                                       BisimWitness::Mode mode,
                                       std::optional<Literal> lit = std::nullopt);

struct CopyResult {
    KripkeModel model;
    WorldId copy;
};

/// Duplicates a cluster world of a K5-model: the copy joins the cluster,
/// mirrors the valuation, and inherits the root edge of the original unless
/// `away_from_root`. Copying away from the root is rejected when the root
/// itself sits inside the cluster (no K5 shape could result).
CopyResult copy_world(const KripkeModel& m, const WorldId& w, bool away_from_root);

// --- formula sampling -------------------------------------------------------

/// Deterministic across platforms (no uniform_int_distribution).
Formula random_formula(std::mt19937_64& rng, int connectives, const std::vector<Literal>& leaves,
                       bool allow_constants = true);

/// All NNF formulas with at most `max_connectives` connectives over the
/// leaf pool plus T and F.
std::vector<Formula> enumerate_formulas(int max_connectives, const std::vector<Literal>& leaves);

// --- interpolant checking ---------------------------------------------------

struct UlipConfig {
    int exhaustive_connectives = 3;
    int random_count = 200;
    int random_connectives = 6;
    uint64_t seed = 0;
    std::string fresh_atom = "r";
    bool both_polarities = false;  // atom-level check: ban the negation too
    int jobs = 1;
};

struct UlipReport {
    bool clause_i = false;
    bool clause_ii = false;
    size_t checked = 0;
    std::vector<std::string> failures;  // psi instances breaking clause iii

    bool pass() const { return clause_i && clause_ii && failures.empty(); }
    std::string to_json() const;
};

/// The three interpolant conditions for candidate `interp` against `phi`
/// at literal `ell`: literal containment, provable implication, and the
/// strongest-consequence test over an exhaustive plus random psi corpus.
UlipReport check_ulip(const Formula& phi, const Literal& ell, const Formula& interp,
                      const UlipConfig& cfg = {});

}  // namespace k5kit
