#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k5kit/formula.hpp"
#include "k5kit/kripke.hpp"
#include "k5kit/multiformula.hpp"
#include "k5kit/sequent.hpp"

namespace k5kit {

enum class RuleId : uint8_t {
    IdP,
    IdTop,
    And,
    Or,
    BoxT,
    BoxTPrime,
    BoxC,
    BoxCPrime,
    DiaT,
    DiaC,
    T,
    DT,
    DC,
    DCPrime,
};

std::string rule_name(RuleId r);

/// Rules the calculus for a logic may use. Axioms, the propositional rules,
/// dia_c and t are shared by all six.
std::vector<RuleId> rule_set(Logic logic);

struct ProofTree {
    RuleId rule;
    Label label;                       // axiom component, or principal position
    std::optional<Formula> principal;  // absent on axioms
    std::vector<ProofTree> premises;   // two for the conjunction rule, else one
};

std::string proof_to_text(const ProofTree& t);
std::string proof_to_json(const ProofTree& t);

struct SearchStats {
    size_t max_branch_formulas = 0;  // largest labeled-formula set seen
    size_t branch_bound = 0;         // s * (N + 2s) for the root sequent
    size_t visited = 0;
};

struct SearchOutcome {
    std::optional<ProofTree> proof;          // set when proved
    std::optional<LayeredSequent> refuted;   // first saturated open leaf otherwise
    SearchStats stats;

    bool proved() const { return proof.has_value(); }
};

/// Premises of the unique rule instance for an unsaturated item. The
/// principal formula stays in place; new components take the smallest
/// free index.
struct RuleApplication {
    RuleId rule;
    std::vector<LayeredSequent> premises;
};
RuleApplication apply_rule(const LayeredSequent& g, const UnsaturatedItem& item, Logic logic);

/// Saturation-driven depth-first search. Deterministic: the first
/// unsaturated item (label order, insertion order) is always processed, and
/// on failure the first saturated open leaf is reported. Branch sizes are
/// checked against the s(N+2s) bound as the search runs.
SearchOutcome prove(const LayeredSequent& g, Logic logic);

/// Trunk {f}, except S5 where the formula starts in a bracket component.
LayeredSequent initial_sequent(const Formula& f, Logic logic);
Label start_label(Logic logic);

/// Model read off a saturated open leaf: worlds are the leaf's labels, the
/// root sees the bracket worlds, crown worlds form a cluster, and p holds
/// exactly where ~p occurs. Every leaf formula is false at its own world
/// (checked). KD5/KD45 leaves without a crown get one padding cluster world
/// so the frame is serial.
std::pair<KripkeModel, Interpretation> countermodel_from_leaf(const LayeredSequent& leaf,
                                                              Logic logic);

struct DecideResult {
    bool valid = false;
    std::optional<ProofTree> proof;
    std::optional<KripkeModel> countermodel;
    std::optional<Interpretation> interpretation;
    Label start;
    SearchStats stats;
};

/// The decision procedure: proof of the initial sequent, or a verified
/// countermodel falsifying f at the start label's world.
DecideResult decide(const Formula& f, Logic logic);

}  // namespace k5kit
