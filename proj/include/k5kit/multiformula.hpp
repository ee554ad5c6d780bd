#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "k5kit/formula.hpp"
#include "k5kit/kripke.hpp"
#include "k5kit/sequent.hpp"

namespace k5kit {

inline constexpr size_t kDefaultNodeCap = 1'000'000;

struct NodeCapExceeded : std::runtime_error {
    explicit NodeCapExceeded(size_t cap)
        : std::runtime_error("multiformula node cap exceeded (" + std::to_string(cap) +
                             "); raise the cap to continue") {}
};

/// Label-tagged boolean combination of formulas: the carrier of
/// interpolants. Immutable, structure-shared.
class Multiformula {
  public:
    enum class Kind : uint8_t { Atom, MAnd, MOr };

    struct Node;

    Multiformula();

    static Multiformula atom(Label l, Formula f);
    static Multiformula mand(Multiformula a, Multiformula b);
    static Multiformula mor(Multiformula a, Multiformula b);

    Kind kind() const;
    bool is(Kind k) const { return kind() == k; }
    const Label& label() const;
    const Formula& formula() const;
    const Multiformula& lhs() const;
    const Multiformula& rhs() const;

    std::set<Label> labels() const;
    size_t size() const;

    friend bool operator==(const Multiformula& a, const Multiformula& b);

    /// Debug rendering: `@. : phi *m* @1 : psi` (*m* = meet, +m+ = join).
    std::string str() const;

  private:
    explicit Multiformula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Multiformula::Node {
    Kind kind;
    Label label;  // Atom only
    Formula formula;
    Multiformula lhs, rhs;

    Node(Kind k, Label l, Formula f, Multiformula a, Multiformula b)
        : kind(k), label(l), formula(std::move(f)), lhs(std::move(a)), rhs(std::move(b)) {}
};

inline Multiformula::Multiformula() : Multiformula(atom(Label::trunk(), Formula::top())) {}
inline Multiformula::Kind Multiformula::kind() const { return node_->kind; }
inline const Label& Multiformula::label() const { return node_->label; }
inline const Formula& Multiformula::formula() const { return node_->formula; }
inline const Multiformula& Multiformula::lhs() const { return node_->lhs; }
inline const Multiformula& Multiformula::rhs() const { return node_->rhs; }

/// Label-to-world map for evaluating sequents and multiformulas inside a
/// model. Construction via `checked` enforces the structural conditions:
/// the trunk maps to the root, bracket worlds are root successors, bracket
/// and double worlds see each other, and the root does not reach double
/// worlds.
struct Interpretation {
    std::map<Label, WorldId> mapping;

    static Interpretation checked(const KripkeModel& m, std::map<Label, WorldId> mapping);

    const WorldId& at(const Label& l) const;
    bool has(const Label& l) const { return mapping.count(l) > 0; }
};

/// Clause check used by `Interpretation::checked`; false instead of throw.
bool interpretation_ok(const KripkeModel& m, const std::map<Label, WorldId>& mapping);

bool eval_multi(const KripkeModel& m, const Interpretation& i, const Multiformula& u);

/// A sequent holds under (M, I) when some member formula holds at its
/// label's world; encoded as the join of all labeled formulas.
Multiformula sequent_as_multiformula(const LayeredSequent& g);

/// One SDNF conjunct (or SCNF disjunct): every label exactly once.
using NormalFormRow = std::map<Label, Formula>;

/// Disjunctive rows of u, padded with T over `label_set` (which must cover
/// labels(u)); same-label parts merge conjunctively. Duplicate rows are
/// dropped. Throws NodeCapExceeded past `cap` cells.
std::vector<NormalFormRow> sdnf_rows(const Multiformula& u, const std::set<Label>& label_set,
                                     size_t cap = kDefaultNodeCap);

/// Conjunctive rows, padded with F, same-label parts merged disjunctively.
std::vector<NormalFormRow> scnf_rows(const Multiformula& u, const std::set<Label>& label_set,
                                     size_t cap = kDefaultNodeCap);

Multiformula rows_to_multiformula(const std::vector<NormalFormRow>& rows, bool dnf,
                                  const Label& anchor);

Multiformula to_sdnf(const Multiformula& u, size_t cap = kDefaultNodeCap);
Multiformula to_scnf(const Multiformula& u, size_t cap = kDefaultNodeCap);

/// Least label of the set, preferring the trunk; trunk when empty.
Label anchor_label(const std::set<Label>& labels);

}  // namespace k5kit
