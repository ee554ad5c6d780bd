#include "k5kit/multiformula.hpp"

#include <algorithm>

namespace k5kit {

Multiformula Multiformula::atom(Label l, Formula f) {
    return Multiformula(std::make_shared<Node>(Kind::Atom, l, std::move(f),
                                               Multiformula(nullptr), Multiformula(nullptr)));
}

Multiformula Multiformula::mand(Multiformula a, Multiformula b) {
    return Multiformula(std::make_shared<Node>(Kind::MAnd, Label::trunk(), Formula::top(),
                                               std::move(a), std::move(b)));
}

Multiformula Multiformula::mor(Multiformula a, Multiformula b) {
    return Multiformula(std::make_shared<Node>(Kind::MOr, Label::trunk(), Formula::top(),
                                               std::move(a), std::move(b)));
}

namespace {

void collect_labels(const Multiformula& u, std::set<Label>& out) {
    if (u.is(Multiformula::Kind::Atom)) {
        out.insert(u.label());
        return;
    }
    collect_labels(u.lhs(), out);
    collect_labels(u.rhs(), out);
}

}  // namespace

std::set<Label> Multiformula::labels() const {
    std::set<Label> out;
    collect_labels(*this, out);
    return out;
}

size_t Multiformula::size() const {
    if (is(Kind::Atom)) return 1;
    return 1 + lhs().size() + rhs().size();
}

bool operator==(const Multiformula& a, const Multiformula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.is(Multiformula::Kind::Atom))
        return a.label() == b.label() && a.formula() == b.formula();
    return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

namespace {

void render(const Multiformula& u, std::string& out, bool parens_needed) {
    if (u.is(Multiformula::Kind::Atom)) {
        out += u.label().str() + " : " + u.formula().str();
        return;
    }
    const char* op = u.is(Multiformula::Kind::MAnd) ? " *m* " : " +m+ ";
    if (parens_needed) out += '(';
    render(u.lhs(), out, true);
    out += op;
    render(u.rhs(), out, true);
    if (parens_needed) out += ')';
}

}  // namespace

std::string Multiformula::str() const {
    std::string out;
    render(*this, out, false);
    return out;
}

Label anchor_label(const std::set<Label>& labels) {
    if (labels.empty() || labels.count(Label::trunk())) return Label::trunk();
    return *labels.begin();
}

// ---------------------------------------------------------------------------
// Interpretations

const WorldId& Interpretation::at(const Label& l) const {
    auto it = mapping.find(l);
    if (it == mapping.end())
        throw std::invalid_argument("interpretation does not cover label " + l.str());
    return it->second;
}

bool interpretation_ok(const KripkeModel& m, const std::map<Label, WorldId>& mapping) {
    for (const auto& [l, w] : mapping)
        if (!m.has_world(w)) return false;

    auto trunk = mapping.find(Label::trunk());
    if (trunk != mapping.end() && trunk->second != m.root) return false;

    for (const auto& [l, w] : mapping) {
        if (l.is_bracket_kind() && trunk != mapping.end() && !m.related(trunk->second, w))
            return false;
        if (l.is_double_kind()) {
            if (trunk != mapping.end() && m.related(trunk->second, w)) return false;
            for (const auto& [l2, w2] : mapping)
                if (l2.is_bracket_kind() && (!m.related(w2, w) || !m.related(w, w2)))
                    return false;
        }
    }
    return true;
}

Interpretation Interpretation::checked(const KripkeModel& m, std::map<Label, WorldId> mapping) {
    for (const auto& [l, w] : mapping)
        if (!m.has_world(w))
            throw std::invalid_argument("interpretation maps " + l.str() + " to unknown world " + w);
    if (!interpretation_ok(m, mapping))
        throw std::invalid_argument("mapping violates interpretation conditions");
    return Interpretation{std::move(mapping)};
}

bool eval_multi(const KripkeModel& m, const Interpretation& i, const Multiformula& u) {
    switch (u.kind()) {
        case Multiformula::Kind::Atom:
            return eval(m, i.at(u.label()), u.formula());
        case Multiformula::Kind::MAnd:
            return eval_multi(m, i, u.lhs()) && eval_multi(m, i, u.rhs());
        case Multiformula::Kind::MOr:
            return eval_multi(m, i, u.lhs()) || eval_multi(m, i, u.rhs());
    }
    return false;
}

Multiformula sequent_as_multiformula(const LayeredSequent& g) {
    std::vector<Multiformula> parts;
    for (const auto& c : g.components())
        for (const auto& f : c.formulas) parts.push_back(Multiformula::atom(c.label, f));
    if (parts.empty()) return Multiformula::atom(Label::trunk(), Formula::bottom());
    Multiformula out = parts.front();
    for (size_t i = 1; i < parts.size(); ++i) out = Multiformula::mor(out, parts[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Normal forms. Distribute treating labeled formulas as atoms, then merge
// per label and pad so every row carries each label exactly once.

namespace {

using Cell = std::pair<Label, Formula>;
using RawRow = std::vector<Cell>;

struct Budget {
    size_t cap;
    size_t used = 0;
    void charge(size_t n) {
        used += n;
        if (used > cap) throw NodeCapExceeded(cap);
    }
};

// dnf=true: rows are conjunctions of a disjunction.
// dnf=false: rows are disjunctions of a conjunction.
std::vector<RawRow> distribute(const Multiformula& u, bool dnf, Budget& budget) {
    if (u.is(Multiformula::Kind::Atom)) {
        budget.charge(1);
        return {{{u.label(), u.formula()}}};
    }
    bool splits = dnf ? u.is(Multiformula::Kind::MOr) : u.is(Multiformula::Kind::MAnd);
    auto a = distribute(u.lhs(), dnf, budget);
    auto b = distribute(u.rhs(), dnf, budget);
    if (splits) {
        for (auto& row : b) a.push_back(std::move(row));
        return a;
    }
    std::vector<RawRow> out;
    out.reserve(a.size() * b.size());
    for (const auto& ra : a)
        for (const auto& rb : b) {
            budget.charge(ra.size() + rb.size());
            RawRow row = ra;
            row.insert(row.end(), rb.begin(), rb.end());
            out.push_back(std::move(row));
        }
    return out;
}

std::vector<NormalFormRow> make_rows(const Multiformula& u, const std::set<Label>& label_set,
                                     size_t cap, bool dnf) {
    for (const auto& l : u.labels())
        if (!label_set.count(l))
            throw std::invalid_argument("label set does not cover " + l.str());

    Budget budget{cap};
    auto raw = distribute(u, dnf, budget);

    const Formula pad = dnf ? Formula::top() : Formula::bottom();
    std::vector<NormalFormRow> rows;
    for (const auto& raw_row : raw) {
        NormalFormRow row;
        for (const auto& [label, f] : raw_row) {
            auto it = row.find(label);
            if (it == row.end()) {
                row.emplace(label, f);
            } else if (!(it->second == f)) {
                it->second =
                    dnf ? Formula::conj(it->second, f) : Formula::disj(it->second, f);
            }
        }
        for (const auto& l : label_set) row.emplace(l, pad);
        bool dup = false;
        for (const auto& seen : rows)
            if (seen == row) {
                dup = true;
                break;
            }
        if (!dup) rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::vector<NormalFormRow> sdnf_rows(const Multiformula& u, const std::set<Label>& label_set,
                                     size_t cap) {
    return make_rows(u, label_set, cap, true);
}

std::vector<NormalFormRow> scnf_rows(const Multiformula& u, const std::set<Label>& label_set,
                                     size_t cap) {
    return make_rows(u, label_set, cap, false);
}

Multiformula rows_to_multiformula(const std::vector<NormalFormRow>& rows, bool dnf,
                                  const Label& anchor) {
    if (rows.empty())
        return Multiformula::atom(anchor, dnf ? Formula::bottom() : Formula::top());
    std::vector<Multiformula> groups;
    groups.reserve(rows.size());
    for (const auto& row : rows) {
        Multiformula g = Multiformula::atom(row.begin()->first, row.begin()->second);
        for (auto it = std::next(row.begin()); it != row.end(); ++it) {
            auto cell = Multiformula::atom(it->first, it->second);
            g = dnf ? Multiformula::mand(g, cell) : Multiformula::mor(g, cell);
        }
        groups.push_back(std::move(g));
    }
    Multiformula out = groups.front();
    for (size_t i = 1; i < groups.size(); ++i)
        out = dnf ? Multiformula::mor(out, groups[i]) : Multiformula::mand(out, groups[i]);
    return out;
}

Multiformula to_sdnf(const Multiformula& u, size_t cap) {
    auto ls = u.labels();
    return rows_to_multiformula(sdnf_rows(u, ls, cap), true, anchor_label(ls));
}

Multiformula to_scnf(const Multiformula& u, size_t cap) {
    auto ls = u.labels();
    return rows_to_multiformula(scnf_rows(u, ls, cap), false, anchor_label(ls));
}

}  // namespace k5kit
