#pragma once

#include <string>
#include <vector>

#include "k5kit/formula.hpp"
#include "k5kit/multiformula.hpp"
#include "k5kit/prover.hpp"
#include "k5kit/sequent.hpp"

namespace k5kit {

/// Which step of the interpolant recursion produced a call's result.
/// Steps are tried in this order; 1, 4a and 4c are leaves.
enum class StepId : uint8_t {
    Closed,          // 1: component with T or a complementary pair
    Propositional,   // 2: unsaturated conjunction/disjunction
    Modal,           // 3: unsaturated box/diamond
    SaturatedNoDia,  // 4a: saturated, diamond-free
    TrunkSerial,     // 4b: saturated trunk-only with diamonds
    Insufficient,    // 4c: bookkeeping cutoff
    DoubleDia,       // 4d: double-diamond expansion
};

std::string step_name(StepId s);

struct InterpolantCall {
    bool t = false;
    std::vector<Formula> sigma_c;  // ordered, duplicate-free
    LayeredSequent sequent;
};

struct InterpolationTrace {
    InterpolantCall call;
    StepId step;
    Multiformula result;
    bool sufficient = true;
    std::vector<InterpolationTrace> children;
};

struct InterpolationOptions {
    size_t node_cap = kDefaultNodeCap;
};

/// Crown formula set and its box/diamond members, in component order.
struct CrownFormulas {
    std::vector<Formula> crown;
    std::vector<Formula> box_dia;
};
CrownFormulas crown_formulas(const LayeredSequent& g);

/// Join of every labeled literal of g other than ell itself (its negation
/// stays in). Empty joins collapse to anchor : F.
Multiformula lit_dis(const Literal& ell, const LayeredSequent& g);

/// The recursive interpolant construction over a K5-sequent. The returned
/// trace carries every call with its step, result and sufficiency status.
InterpolationTrace a_interpolant(const Literal& ell, const InterpolantCall& call,
                                 const InterpolationOptions& opts = {});

/// Strips the trunk labels off a multiformula whose labels are within {@.}.
Formula extract_formula(const Multiformula& u);

/// Equivalence-preserving cleanup: T/F absorption, idempotence, <>F -> F,
/// []T -> T, flattening of nested joins/meets.
Formula simplify(const Formula& f);

struct UliResult {
    Formula interpolant;          // simplified
    Multiformula raw;             // root multiformula before extraction
    InterpolationTrace trace;
};

UliResult uniform_lyndon_interpolant_traced(const Formula& f, const Literal& ell,
                                            const InterpolationOptions& opts = {});

/// The literal's strongest consequence-side interpolant: contains neither
/// the literal nor anything outside the input's literals, and provably
/// implies the input (both checked on every run).
Formula uniform_lyndon_interpolant(const Formula& f, const Literal& ell,
                                   const InterpolationOptions& opts = {});

/// Atom-level interpolant: eliminate ~p first, then p.
Formula uniform_interpolant(const Formula& f, const std::string& atom,
                            const InterpolationOptions& opts = {});

std::string trace_to_text(const InterpolationTrace& t);

}  // namespace k5kit
