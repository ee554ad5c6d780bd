#pragma once

#include <optional>
#include <string>
#include <vector>

#include "k5kit/formula.hpp"
#include "k5kit/kripke.hpp"

namespace k5kit {

/// Component label of a layered sequent. Total order:
/// @. < @.1 < @.2 < ... < @.d < @1 < @2 < ... < @d
struct Label {
    enum class Kind : uint8_t {
        Trunk,              // @.
        Bracket,            // @.i single-bracket crown component
        PlaceholderBracket, // @.d
        Double,             // @i double-bracket crown component
        PlaceholderDouble,  // @d
    };
    Kind kind = Kind::Trunk;
    int index = 0;  // >= 1 for Bracket/Double

    static Label trunk() { return {Kind::Trunk, 0}; }
    static Label bracket(int i) { return {Kind::Bracket, i}; }
    static Label dbl(int i) { return {Kind::Double, i}; }
    static Label placeholder_bracket() { return {Kind::PlaceholderBracket, 0}; }
    static Label placeholder_double() { return {Kind::PlaceholderDouble, 0}; }

    bool is_trunk() const { return kind == Kind::Trunk; }
    bool is_bracket_kind() const {
        return kind == Kind::Bracket || kind == Kind::PlaceholderBracket;
    }
    bool is_double_kind() const {
        return kind == Kind::Double || kind == Kind::PlaceholderDouble;
    }
    bool is_crown() const { return !is_trunk(); }

    friend bool operator==(const Label& a, const Label& b) {
        return a.kind == b.kind && a.index == b.index;
    }
    friend auto operator<=>(const Label& a, const Label& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        return a.index <=> b.index;
    }

    std::string str() const;
};

/// Trunk plus two crown layers, indexed by label. Components are
/// duplicate-free and keep their insertion order; rules only ever add
/// formulas, so membership is all saturation needs.
class LayeredSequent {
  public:
    struct Component {
        Label label;
        std::vector<Formula> formulas;
    };

    LayeredSequent() = default;

    /// Adds the formula, creating the component if needed.
    /// Returns false when it was already present (sequent unchanged).
    bool add(const Label& label, const Formula& f);
    void ensure_component(const Label& label);

    bool has_label(const Label& label) const { return find(label) != nullptr; }
    bool contains(const Label& label, const Formula& f) const;
    const std::vector<Formula>* formulas(const Label& label) const;

    const std::vector<Component>& components() const { return comps_; }
    std::vector<Label> labels() const;

    bool empty() const { return comps_.empty(); }
    size_t labeled_formula_count() const;

    /// Component counts (n, m, k): trunk, bracket-kind, double-kind.
    /// Placeholder labels count as their bracket kind.
    int n() const;
    int m() const;
    int k() const;

    int fresh_bracket_index() const;
    int fresh_double_index() const;

    /// Relabels a component; the target label must be free.
    void rename(const Label& from, const Label& to);

    /// Distinct subformulas across all components.
    size_t subformula_count() const;

    friend bool operator==(const LayeredSequent& a, const LayeredSequent& b);

    std::string str(bool verbose = false) const;

  private:
    const Component* find(const Label& label) const;
    Component* find(const Label& label);
    std::vector<Component> comps_;  // sorted by label
};

/// Formula reading of a sequent: trunk disjunction, then one box per
/// bracket component, two boxes per double component. Empty components
/// and the empty sequent read as F.
Formula iota(const LayeredSequent& g);

/// Per-logic shape conditions on (n, m, k).
bool is_l_sequent(const LayeredSequent& g, Logic logic);

/// What a pending rule application would do. `target` is the crown
/// component a diamond still has to reach.
struct Obligation {
    enum class Kind : uint8_t {
        AndSplit,      // conjunction with neither conjunct present
        OrExpand,      // disjunction with a disjunct missing
        BoxBracket,    // box whose witness [phi] component is missing
        BoxDouble,     // box whose witness [[phi]] component is missing
        DiaAt,         // diamond not yet pushed into `target`
        DTrunk,        // trunk diamond with no bracket witness (d_t)
        DCrown,        // crown diamond with no bracket witness (d_c)
        DCrownDouble,  // crown diamond with no double witness (d_c')
    };
    Kind kind;
    std::optional<Label> target;

    std::string str() const;
};

struct UnsaturatedItem {
    Label label;
    Formula formula;
    Obligation obligation;
};

/// Every labeled formula violating a saturation clause for the logic,
/// ordered by (label, insertion position, obligation). Empty exactly when
/// the sequent is saturated apart from the closure check.
std::vector<UnsaturatedItem> unsaturated_items(const LayeredSequent& g, Logic logic);

/// First label whose component contains T or a complementary literal pair.
std::optional<Label> is_closed(const LayeredSequent& g);

}  // namespace k5kit
