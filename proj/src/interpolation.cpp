#include "k5kit/interpolation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace k5kit {

Formula simplify_shallow(const Formula& f);

std::string step_name(StepId s) {
    switch (s) {
        case StepId::Closed: return "1";
        case StepId::Propositional: return "2";
        case StepId::Modal: return "3";
        case StepId::SaturatedNoDia: return "4a";
        case StepId::TrunkSerial: return "4b";
        case StepId::Insufficient: return "4c";
        case StepId::DoubleDia: return "4d";
    }
    return "?";
}

namespace {

bool vec_contains(const std::vector<Formula>& v, const Formula& f) {
    for (const auto& x : v)
        if (x == f) return true;
    return false;
}

void push_unique(std::vector<Formula>& v, const Formula& f) {
    if (!vec_contains(v, f)) v.push_back(f);
}

bool subset_of(const std::vector<Formula>& a, const std::vector<Formula>& b) {
    for (const auto& x : a)
        if (!vec_contains(b, x)) return false;
    return true;
}

// Sound structural entailment check (never claims entailment that does not
// hold; may miss some). The budget keeps the worst case linear-ish.
bool implies_rec(const Formula& a, const Formula& b, int& budget) {
    if (--budget < 0) return false;
    if (a == b) return true;
    if (a.is(Conn::Bottom) || b.is(Conn::Top)) return true;
    if (a.is(Conn::Or)) return implies_rec(a.lhs(), b, budget) && implies_rec(a.rhs(), b, budget);
    if (b.is(Conn::And)) return implies_rec(a, b.lhs(), budget) && implies_rec(a, b.rhs(), budget);
    if (a.is(Conn::And))
        return implies_rec(a.lhs(), b, budget) || implies_rec(a.rhs(), b, budget);
    if (b.is(Conn::Or)) return implies_rec(a, b.lhs(), budget) || implies_rec(a, b.rhs(), budget);
    if (a.is(Conn::Box) && b.is(Conn::Box)) return implies_rec(a.child(), b.child(), budget);
    if (a.is(Conn::Dia) && b.is(Conn::Dia)) return implies_rec(a.child(), b.child(), budget);
    return false;
}

bool implies_syntactic(const Formula& a, const Formula& b) {
    int budget = 4096;
    return implies_rec(a, b, budget);
}

Multiformula relabel(const Multiformula& u, const std::map<Label, Label>& map) {
    switch (u.kind()) {
        case Multiformula::Kind::Atom: {
            auto it = map.find(u.label());
            return it == map.end() ? u : Multiformula::atom(it->second, u.formula());
        }
        case Multiformula::Kind::MAnd:
            return Multiformula::mand(relabel(u.lhs(), map), relabel(u.rhs(), map));
        case Multiformula::Kind::MOr:
            return Multiformula::mor(relabel(u.lhs(), map), relabel(u.rhs(), map));
    }
    return u;
}

bool has_diamond(const LayeredSequent& g) {
    for (const auto& c : g.components())
        for (const auto& f : c.formulas)
            if (f.is(Conn::Dia)) return true;
    return false;
}

// children of every labeled diamond, in (label, insertion) order
std::vector<Formula> diamond_children(const LayeredSequent& g, bool crown_only) {
    std::vector<Formula> out;
    for (const auto& c : g.components()) {
        if (crown_only && c.label.is_trunk()) continue;
        for (const auto& f : c.formulas)
            if (f.is(Conn::Dia)) push_unique(out, f.child());
    }
    return out;
}

}  // namespace

CrownFormulas crown_formulas(const LayeredSequent& g) {
    CrownFormulas out;
    for (const auto& c : g.components()) {
        if (c.label.is_trunk()) continue;
        for (const auto& f : c.formulas) {
            push_unique(out.crown, f);
            if (f.is_modal()) push_unique(out.box_dia, f);
        }
    }
    return out;
}

Multiformula lit_dis(const Literal& ell, const LayeredSequent& g) {
    std::vector<Multiformula> parts;
    for (const auto& c : g.components())
        for (const auto& f : c.formulas)
            if (f.is(Conn::Lit) && !(f.literal() == ell))
                parts.push_back(Multiformula::atom(c.label, f));
    if (parts.empty()) {
        std::set<Label> ls;
        for (const auto& l : g.labels()) ls.insert(l);
        return Multiformula::atom(anchor_label(ls), Formula::bottom());
    }
    Multiformula out = parts.front();
    for (size_t i = 1; i < parts.size(); ++i) out = Multiformula::mor(out, parts[i]);
    return out;
}

namespace {

// Normal-form computation tuned for the recursion: rows are kept sparse
// (missing label = neutral element), every cell is simplified, and after
// each fold of the distribution the row set is reduced again. Reduction
// drops rows with an absorbing cell, duplicates, and rows entailed
// cell-wise by another row. All of it preserves meaning exactly, and the
// box/diamond wrapping applied to rows afterwards is monotone, so the
// wrapped results keep their meaning too.
class RowNormalizer {
  public:
    RowNormalizer(bool dnf, size_t cap) : dnf_(dnf), cap_(cap) {}

    std::vector<NormalFormRow> run(const Multiformula& u, const std::set<Label>& label_set) {
        auto rows = walk(u);
        const Formula neutral = dnf_ ? Formula::top() : Formula::bottom();
        const Formula absorbing = dnf_ ? Formula::bottom() : Formula::top();
        if (rows.empty()) {
            // no rows left: the whole form collapsed to the absorbing value
            NormalFormRow row;
            for (const auto& l : label_set) row.emplace(l, absorbing);
            return {std::move(row)};
        }
        for (auto& row : rows)
            for (const auto& l : label_set) row.emplace(l, neutral);
        return rows;
    }

  private:
    bool dnf_;
    size_t cap_;
    size_t used_ = 0;

    void charge(size_t n) {
        used_ += n;
        if (used_ > cap_) throw NodeCapExceeded(cap_);
    }

    // sparse rows never store the neutral element
    void put(NormalFormRow& row, const Label& l, const Formula& f) {
        if (f == (dnf_ ? Formula::top() : Formula::bottom())) return;
        auto it = row.find(l);
        if (it == row.end()) {
            row.emplace(l, f);
        } else if (!(it->second == f)) {
            it->second = simplify_shallow(dnf_ ? Formula::conj(it->second, f)
                                               : Formula::disj(it->second, f));
            if (it->second == (dnf_ ? Formula::top() : Formula::bottom())) row.erase(it);
        }
    }

    std::vector<NormalFormRow> walk(const Multiformula& u) {
        if (u.is(Multiformula::Kind::Atom)) {
            charge(1);
            NormalFormRow row;
            put(row, u.label(), simplify_shallow(u.formula()));
            std::vector<NormalFormRow> rows = {std::move(row)};
            reduce(rows);
            return rows;
        }
        auto a = walk(u.lhs());
        auto b = walk(u.rhs());
        bool splits = dnf_ ? u.is(Multiformula::Kind::MOr) : u.is(Multiformula::Kind::MAnd);
        std::vector<NormalFormRow> out;
        if (splits) {
            out = std::move(a);
            for (auto& row : b) out.push_back(std::move(row));
        } else {
            out.reserve(a.size() * b.size());
            for (const auto& ra : a)
                for (const auto& rb : b) {
                    charge(ra.size() + rb.size());
                    NormalFormRow row = ra;
                    for (const auto& [l, f] : rb) put(row, l, f);
                    out.push_back(std::move(row));
                }
        }
        reduce(out);
        return out;
    }

    void reduce(std::vector<NormalFormRow>& rows) {
        const Formula absorbing = dnf_ ? Formula::bottom() : Formula::top();

        std::vector<NormalFormRow> alive;
        std::set<NormalFormRow> seen;
        for (auto& row : rows) {
            bool dead = false;
            for (const auto& [l, f] : row)
                if (f == absorbing) {
                    dead = true;  // false conjunct / true disjunct
                    break;
                }
            if (!dead && seen.insert(row).second) alive.push_back(std::move(row));
        }

        if (alive.size() > 1 && alive.size() <= 1024) {
            // row b absorbs row a when each of b's cells is entailed the
            // right way around by a's cell at the same label
            auto covers = [&](size_t b, size_t a) {
                for (const auto& [l, fb] : alive[b]) {
                    auto it = alive[a].find(l);
                    if (it == alive[a].end()) return false;
                    bool ok = dnf_ ? implies_syntactic(it->second, fb)
                                   : implies_syntactic(fb, it->second);
                    if (!ok) return false;
                }
                return true;
            };
            std::vector<bool> dead(alive.size(), false);
            for (size_t a = 0; a < alive.size(); ++a) {
                if (dead[a]) continue;
                for (size_t b = 0; b < alive.size(); ++b) {
                    if (a == b || dead[b]) continue;
                    if (covers(b, a)) {
                        dead[a] = true;
                        break;
                    }
                }
            }
            std::vector<NormalFormRow> out;
            for (size_t i = 0; i < alive.size(); ++i)
                if (!dead[i]) out.push_back(std::move(alive[i]));
            alive = std::move(out);
        }
        rows = std::move(alive);
    }
};

std::vector<NormalFormRow> normalized_rows(const Multiformula& u, const std::set<Label>& labels,
                                           bool dnf, size_t cap) {
    return RowNormalizer(dnf, cap).run(u, labels);
}

struct Builder {
    Literal ell;
    InterpolationOptions opts;

    InterpolationTrace compute(bool t, std::vector<Formula> sigma_c, LayeredSequent g) {
        if (!is_l_sequent(g, Logic::K5))
            throw std::invalid_argument("interpolation needs a K5-sequent: " + g.str());
        InterpolationTrace node;
        node.call = InterpolantCall{t, sigma_c, g};

        // Step 1
        if (auto closed = is_closed(g)) {
            node.step = StepId::Closed;
            node.result = Multiformula::atom(*closed, Formula::top());
            return node;
        }

        auto items = unsaturated_items(g, Logic::K5);

        // Step 2: least unsaturated conjunction/disjunction
        for (const auto& item : items) {
            if (item.obligation.kind == Obligation::Kind::OrExpand) {
                node.step = StepId::Propositional;
                LayeredSequent p = g;
                p.add(item.label, item.formula.lhs());
                p.add(item.label, item.formula.rhs());
                node.children.push_back(compute(t, sigma_c, std::move(p)));
                node.result = node.children.back().result;
                return node;
            }
            if (item.obligation.kind == Obligation::Kind::AndSplit) {
                node.step = StepId::Propositional;
                LayeredSequent left = g, right = g;
                left.add(item.label, item.formula.lhs());
                right.add(item.label, item.formula.rhs());
                node.children.push_back(compute(t, sigma_c, std::move(left)));
                node.children.push_back(compute(t, sigma_c, std::move(right)));
                node.result = Multiformula::mand(node.children[0].result,
                                                 node.children[1].result);
                return node;
            }
        }

        // Step 3: least unsaturated modal item
        if (!items.empty()) {
            node.step = StepId::Modal;
            const auto& item = items.front();
            switch (item.obligation.kind) {
                case Obligation::Kind::BoxBracket:
                    box_step(node, t, sigma_c, g, item, /*bracket=*/true);
                    return node;
                case Obligation::Kind::BoxDouble:
                    box_step(node, t, sigma_c, g, item, /*bracket=*/false);
                    return node;
                case Obligation::Kind::DiaAt: {
                    LayeredSequent p = g;
                    p.add(*item.obligation.target, item.formula.child());
                    node.children.push_back(compute(t, sigma_c, std::move(p)));
                    node.result = node.children.back().result;
                    return node;
                }
                default:
                    throw std::logic_error("unexpected obligation in K5 interpolation: " +
                                           item.obligation.str());
            }
        }

        // Step 4: g is saturated
        if (!has_diamond(g)) {
            node.step = StepId::SaturatedNoDia;
            node.result = lit_dis(ell, g);
            return node;
        }

        if (g.m() == 0 && g.k() == 0) {
            // Step 4b: serialize the trunk
            if (t) throw std::logic_error("trunk-serial step reached with t=1");
            if (!sigma_c.empty())
                throw std::logic_error("trunk-serial step reached with nonempty bookkeeping set");
            node.step = StepId::TrunkSerial;
            LayeredSequent p = g;
            for (const auto& psi : diamond_children(g, false)) p.add(Label::bracket(1), psi);
            node.children.push_back(compute(false, sigma_c, std::move(p)));

            std::set<Label> label_set = {Label::trunk(), Label::bracket(1)};
            auto rows = normalized_rows(node.children.back().result, label_set, true,
                                        opts.node_cap);

            Label root = Label::trunk();
            Multiformula body =
                make_serial_disjunct(rows.front(), root);
            for (size_t i = 1; i < rows.size(); ++i)
                body = Multiformula::mor(body, make_serial_disjunct(rows[i], root));
            Multiformula left =
                Multiformula::mor(Multiformula::atom(root, Formula::box(Formula::bottom())), body);
            Multiformula right = Multiformula::mor(
                Multiformula::atom(root, Formula::dia(Formula::top())), lit_dis(ell, g));
            node.result = Multiformula::mand(left, right);
            check_serial_subtree(node.children.back());
            return node;
        }

        auto [crown, box_dia] = crown_formulas(g);
        if (t && subset_of(box_dia, sigma_c)) {
            node.step = StepId::Insufficient;
            node.result = lit_dis(ell, g);
            return node;
        }

        // Step 4d: double-diamond expansion. With t=1 the bookkeeping set
        // grows strictly here, since the cutoff above did not fire.
        node.step = StepId::DoubleDia;
        if (!subset_of(sigma_c, box_dia))
            throw std::logic_error("bookkeeping set escaped the crown modal formulas");

        // the previous expansion's placeholder components turn into ordinary
        // numbered ones; the caller still knows them by their placeholder
        // names, so the finished result is translated back at the end
        LayeredSequent g2 = g;
        std::map<Label, Label> restore;
        if (g2.has_label(Label::placeholder_bracket())) {
            Label to = Label::bracket(g2.fresh_bracket_index());
            g2.rename(Label::placeholder_bracket(), to);
            restore[to] = Label::placeholder_bracket();
        }
        if (g2.has_label(Label::placeholder_double())) {
            Label to = Label::dbl(g2.fresh_double_index());
            g2.rename(Label::placeholder_double(), to);
            restore[to] = Label::placeholder_double();
        }
        if (!g2.has_label(Label::bracket(1)))
            throw std::logic_error("double-diamond step expects a first bracket component");

        LayeredSequent p = g2;
        p.ensure_component(Label::placeholder_bracket());
        for (const auto& psi : diamond_children(g2, false))
            p.add(Label::placeholder_bracket(), psi);
        p.ensure_component(Label::placeholder_double());
        for (const auto& chi : diamond_children(g2, true))
            p.add(Label::placeholder_double(), chi);

        node.call.sequent = g2;  // the call proceeds on the renamed sequent
        node.children.push_back(compute(true, box_dia, std::move(p)));

        std::set<Label> label_set;
        for (const auto& l : g2.labels()) label_set.insert(l);
        label_set.insert(Label::placeholder_bracket());
        label_set.insert(Label::placeholder_double());
        auto rows =
            normalized_rows(node.children.back().result, label_set, true, opts.node_cap);

        Multiformula out = make_double_disjunct(rows.front(), g2);
        for (size_t i = 1; i < rows.size(); ++i)
            out = Multiformula::mor(out, make_double_disjunct(rows[i], g2));
        if (!restore.empty()) out = relabel(out, restore);
        node.result = std::move(out);
        check_double_subtree(node.children.back());
        return node;
    }

    // join of labeled atoms; atoms carrying F are neutral and dropped
    static Multiformula build_join(const std::vector<std::pair<Label, Formula>>& cells) {
        std::optional<Multiformula> out;
        for (const auto& [label, f] : cells) {
            if (f.is(Conn::Bottom)) continue;
            auto atom = Multiformula::atom(label, f);
            out = out ? Multiformula::mor(*out, atom) : atom;
        }
        return out ? *out : Multiformula::atom(cells.front().first, Formula::bottom());
    }

    // meet of labeled atoms; atoms carrying T are neutral and dropped
    static Multiformula build_meet(const std::vector<std::pair<Label, Formula>>& cells) {
        std::optional<Multiformula> out;
        for (const auto& [label, f] : cells) {
            if (f.is(Conn::Top)) continue;
            auto atom = Multiformula::atom(label, f);
            out = out ? Multiformula::mand(*out, atom) : atom;
        }
        return out ? *out : Multiformula::atom(cells.front().first, Formula::top());
    }

    // rows 5 and 6: recurse with the fresh witness component, read the SCNF
    // back off, and box the fresh-label part at the principal's component
    void box_step(InterpolationTrace& node, bool t, const std::vector<Formula>& sigma_c,
                  const LayeredSequent& g, const UnsaturatedItem& item, bool bracket) {
        Label fresh = bracket ? Label::bracket(g.fresh_bracket_index())
                              : Label::dbl(g.fresh_double_index());
        Label at = bracket ? Label::trunk() : item.label;
        LayeredSequent p = g;
        p.add(fresh, item.formula.child());
        node.children.push_back(compute(t, sigma_c, std::move(p)));

        std::set<Label> label_set;
        for (const auto& l : g.labels()) label_set.insert(l);
        label_set.insert(fresh);
        auto rows =
            normalized_rows(node.children.back().result, label_set, false, opts.node_cap);

        std::optional<Multiformula> out;
        for (const auto& row : rows) {
            std::vector<std::pair<Label, Formula>> cells;
            cells.emplace_back(at, Formula::box(row.at(fresh)));
            for (const auto& [tau, gamma] : row)
                if (!(tau == fresh)) cells.emplace_back(tau, gamma);
            Multiformula part = build_join(cells);
            out = out ? Multiformula::mand(*out, part) : part;
        }
        node.result = *out;
    }

    // one disjunct of the trunk-serial result: @. : <>delta meet @. : gamma
    static Multiformula make_serial_disjunct(const NormalFormRow& row, const Label& root) {
        return build_meet({{root, Formula::dia(row.at(Label::bracket(1)))},
                           {root, row.at(root)}});
    }

    // one disjunct of the double-diamond result
    static Multiformula make_double_disjunct(const NormalFormRow& row, const LayeredSequent& g2) {
        std::vector<std::pair<Label, Formula>> cells;
        cells.emplace_back(Label::trunk(), Formula::dia(row.at(Label::placeholder_bracket())));
        cells.emplace_back(Label::bracket(1), Formula::dia(row.at(Label::placeholder_double())));
        for (const auto& tau : g2.labels()) cells.emplace_back(tau, row.at(tau));
        return build_meet(cells);
    }

    // branches above a trunk-serial step: propositional/modal only, ending
    // at a closed leaf or another double-diamond expansion
    static void check_serial_subtree(const InterpolationTrace& n) {
        switch (n.step) {
            case StepId::Propositional:
            case StepId::Modal:
                for (const auto& c : n.children) check_serial_subtree(c);
                return;
            case StepId::Closed:
            case StepId::DoubleDia:
                return;
            default:
                throw std::logic_error("unexpected step above trunk-serial: " +
                                       step_name(n.step));
        }
    }

    // branches above a double-diamond step: propositional prefix, then a
    // closed leaf, a modal continuation, a cutoff, or another expansion
    static void check_double_subtree(const InterpolationTrace& n) {
        switch (n.step) {
            case StepId::Propositional:
                for (const auto& c : n.children) check_double_subtree(c);
                return;
            case StepId::Closed:
            case StepId::Modal:
            case StepId::Insufficient:
            case StepId::DoubleDia:
                return;
            default:
                throw std::logic_error("unexpected step above double-diamond: " +
                                       step_name(n.step));
        }
    }
};

void set_status(InterpolationTrace& n) {
    for (auto& c : n.children) set_status(c);
    switch (n.step) {
        case StepId::Insufficient:
            n.sufficient = false;
            break;
        case StepId::Propositional:
        case StepId::Modal:
            n.sufficient = std::all_of(n.children.begin(), n.children.end(),
                                       [](const InterpolationTrace& c) { return c.sufficient; });
            break;
        default:
            n.sufficient = true;  // leaves 1/4a; 4b and 4d absorb their subtrees
            break;
    }
}

}  // namespace

InterpolationTrace a_interpolant(const Literal& ell, const InterpolantCall& call,
                                 const InterpolationOptions& opts) {
    Builder b{ell, opts};
    auto trace = b.compute(call.t, call.sigma_c, call.sequent);
    set_status(trace);
    return trace;
}

Formula extract_formula(const Multiformula& u) {
    switch (u.kind()) {
        case Multiformula::Kind::Atom:
            if (!u.label().is_trunk())
                throw std::invalid_argument("foreign label in interpolant: " + u.label().str());
            return u.formula();
        case Multiformula::Kind::MAnd:
            return Formula::conj(extract_formula(u.lhs()), extract_formula(u.rhs()));
        case Multiformula::Kind::MOr:
            return Formula::disj(extract_formula(u.lhs()), extract_formula(u.rhs()));
    }
    return Formula::top();
}

namespace {

void flatten(const Formula& f, Conn op, std::vector<Formula>& out) {
    if (f.kind() == op) {
        flatten(f.lhs(), op, out);
        flatten(f.rhs(), op, out);
    } else {
        out.push_back(f);
    }
}

Formula simplify_once(const Formula& f, bool deep) {
    switch (f.kind()) {
        case Conn::Top:
        case Conn::Bottom:
        case Conn::Lit:
            return f;
        case Conn::Box: {
            Formula c = simplify_once(f.child(), deep);
            return c.is(Conn::Top) ? Formula::top() : Formula::box(c);
        }
        case Conn::Dia: {
            Formula c = simplify_once(f.child(), deep);
            return c.is(Conn::Bottom) ? Formula::bottom() : Formula::dia(c);
        }
        case Conn::And:
        case Conn::Or: {
            bool conj = f.is(Conn::And);
            std::vector<Formula> parts;
            flatten(f, f.kind(), parts);
            std::vector<Formula> kept;
            for (const auto& raw : parts) {
                Formula p = simplify_once(raw, deep);
                if (conj ? p.is(Conn::Bottom) : p.is(Conn::Top))
                    return conj ? Formula::bottom() : Formula::top();
                if (conj ? p.is(Conn::Top) : p.is(Conn::Bottom)) continue;
                bool dup = false;
                for (const auto& q : kept)
                    if (q == p) {
                        dup = true;
                        break;
                    }
                if (!dup) kept.push_back(p);
            }
            if (kept.empty()) return conj ? Formula::top() : Formula::bottom();

            // complementary members collapse the whole chain
            for (const auto& x : kept) {
                Formula nx = negate(x);
                for (const auto& y : kept)
                    if (y == nx) return conj ? Formula::bottom() : Formula::top();
            }

            // boxes in a meet and diamonds in a join merge over one modality
            if (deep) {
                std::vector<Formula> modal_children, rest;
                Conn modal = conj ? Conn::Box : Conn::Dia;
                for (const auto& x : kept)
                    (x.kind() == modal ? modal_children : rest)
                        .push_back(x.kind() == modal ? x.child() : x);
                if (modal_children.size() >= 2) {
                    Formula body = modal_children.front();
                    for (size_t i = 1; i < modal_children.size(); ++i)
                        body = conj ? Formula::conj(body, modal_children[i])
                                    : Formula::disj(body, modal_children[i]);
                    body = simplify_once(body, deep);
                    rest.push_back(conj ? Formula::box(body) : Formula::dia(body));
                    kept = std::move(rest);
                }
            }

            // absorption via structural entailment: in a meet drop members
            // implied by another, in a join drop members implying another
            if (kept.size() <= 64) {
                std::vector<bool> drop(kept.size(), false);
                for (size_t y = 0; y < kept.size(); ++y) {
                    for (size_t x = 0; x < kept.size() && !drop[y]; ++x) {
                        if (x == y || drop[x]) continue;
                        bool redundant = conj ? implies_syntactic(kept[x], kept[y])
                                              : implies_syntactic(kept[y], kept[x]);
                        if (redundant && !(kept[x] == kept[y])) drop[y] = true;
                    }
                }
                std::vector<Formula> survivors;
                for (size_t i = 0; i < kept.size(); ++i)
                    if (!drop[i]) survivors.push_back(kept[i]);
                kept = std::move(survivors);
            }

            // distribution factoring: members identical up to one dual-chain
            // element merge, e.g. (x | a) & (x | b) into x | (a & b)
            if (deep && kept.size() <= 64) {
                Conn dual = conj ? Conn::Or : Conn::And;
                auto member_set = [&](const Formula& g) {
                    std::vector<Formula> out;
                    flatten(g, dual, out);
                    return out;
                };
                bool merged_any = true;
                while (merged_any && kept.size() >= 2) {
                    merged_any = false;
                    for (size_t i = 0; i < kept.size() && !merged_any; ++i) {
                        auto si = member_set(kept[i]);
                        for (size_t j = i + 1; j < kept.size() && !merged_any; ++j) {
                            auto sj = member_set(kept[j]);
                            if (si.size() != sj.size() || si.size() < 2) continue;
                            std::vector<Formula> common;
                            std::optional<Formula> only_i, only_j;
                            bool ok = true;
                            for (const auto& x : si) {
                                bool in_j = false;
                                for (const auto& y : sj)
                                    if (x == y) {
                                        in_j = true;
                                        break;
                                    }
                                if (in_j) {
                                    common.push_back(x);
                                } else if (!only_i) {
                                    only_i = x;
                                } else {
                                    ok = false;
                                    break;
                                }
                            }
                            if (!ok || !only_i) continue;
                            for (const auto& y : sj) {
                                bool in_i = false;
                                for (const auto& x : si)
                                    if (x == y) {
                                        in_i = true;
                                        break;
                                    }
                                if (!in_i) {
                                    if (only_j) {
                                        ok = false;
                                        break;
                                    }
                                    only_j = y;
                                }
                            }
                            if (!ok || !only_j) continue;
                            Formula pair =
                                simplify_once(conj ? Formula::conj(*only_i, *only_j)
                                                   : Formula::disj(*only_i, *only_j),
                                              deep);
                            Formula rebuilt = pair;
                            for (const auto& x : common)
                                rebuilt = conj ? Formula::disj(rebuilt, x)
                                               : Formula::conj(rebuilt, x);
                            rebuilt = simplify_once(rebuilt, deep);
                            kept[i] = rebuilt;
                            kept.erase(kept.begin() + j);
                            merged_any = true;
                        }
                    }
                }
            }

            if (kept.empty()) return conj ? Formula::top() : Formula::bottom();
            if (kept.size() == 1) return kept.front();
            std::vector<Formula> final_parts = std::move(kept);

            std::sort(final_parts.begin(), final_parts.end(),
                      [](const Formula& a, const Formula& b) {
                          return Formula::compare(a, b) < 0;
                      });
            Formula out = final_parts.front();
            for (size_t i = 1; i < final_parts.size(); ++i)
                out = conj ? Formula::conj(out, final_parts[i]) : Formula::disj(out, final_parts[i]);
            return out;
        }
    }
    return f;
}

}  // namespace

namespace {

Formula simplify_fix(const Formula& f, bool deep) {
    Formula prev = f;
    for (int i = 0; i < 8; ++i) {
        Formula next = simplify_once(prev, deep);
        if (next == prev) return next;
        prev = next;
    }
    return prev;
}

}  // namespace

Formula simplify(const Formula& f) { return simplify_fix(f, true); }

Formula simplify_shallow(const Formula& f) { return simplify_fix(f, false); }

namespace {

// Last-mile shrinking with the decision procedure itself: members of the
// top-level chain that another member provably subsumes are dropped. Each
// removal is licensed by an actual proof, so equivalence is guaranteed.
Formula prover_absorb(const Formula& f) {
    if (!f.is(Conn::And) && !f.is(Conn::Or)) return f;
    bool conj = f.is(Conn::And);
    std::vector<Formula> parts;
    flatten(f, f.kind(), parts);
    if (parts.size() < 2 || parts.size() > 512) return f;

    std::vector<bool> dead(parts.size(), false);
    for (size_t y = 0; y < parts.size(); ++y) {
        if (dead[y]) continue;
        for (size_t x = 0; x < parts.size(); ++x) {
            if (x == y || dead[x]) continue;
            const Formula& strong = conj ? parts[x] : parts[y];
            const Formula& weak = conj ? parts[y] : parts[x];
            if (decide(Formula::disj(negate(strong), weak), Logic::K5).valid) {
                dead[y] = true;
                break;
            }
        }
    }
    std::optional<Formula> out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (dead[i]) continue;
        out = out ? (conj ? Formula::conj(*out, parts[i]) : Formula::disj(*out, parts[i]))
                  : parts[i];
    }
    return simplify(*out);
}

}  // namespace

UliResult uniform_lyndon_interpolant_traced(const Formula& f, const Literal& ell,
                                            const InterpolationOptions& opts) {
    InterpolantCall root;
    root.t = false;
    root.sequent = LayeredSequent();
    root.sequent.add(Label::trunk(), f);
    UliResult res{Formula::top(), Multiformula(), a_interpolant(ell, root, opts)};
    res.raw = res.trace.result;
    res.interpolant = prover_absorb(simplify(extract_formula(res.raw)));

    // the two checkable interpolant conditions run on every computation
    auto allowed = literals(f);
    allowed.erase(ell);
    for (const auto& l : literals(res.interpolant))
        if (!allowed.count(l))
            throw std::logic_error("interpolant mentions disallowed literal " + l.str());
    if (!decide(Formula::disj(negate(res.interpolant), f), Logic::K5).valid)
        throw std::logic_error("interpolant does not imply the input");
    return res;
}

Formula uniform_lyndon_interpolant(const Formula& f, const Literal& ell,
                                   const InterpolationOptions& opts) {
    return uniform_lyndon_interpolant_traced(f, ell, opts).interpolant;
}

Formula uniform_interpolant(const Formula& f, const std::string& atom,
                            const InterpolationOptions& opts) {
    Formula stage1 = uniform_lyndon_interpolant(f, Literal(atom, true), opts);
    Formula stage2 = uniform_lyndon_interpolant(stage1, Literal(atom, false), opts);
    auto lits = literals(stage2);
    if (lits.count(Literal(atom, false)) || lits.count(Literal(atom, true)))
        throw std::logic_error("uniform interpolant still mentions " + atom);
    return stage2;
}

namespace {

void trace_text_rec(const InterpolationTrace& n, std::string& out) {
    std::ostringstream os;
    os << "step=" << step_name(n.step) << " t=" << (n.call.t ? 1 : 0)
       << " |Sigma_c|=" << n.call.sigma_c.size() << " sequent=" << n.call.sequent.str()
       << " status=" << (n.sufficient ? "sufficient" : "insufficient") << "\n";
    out += os.str();
    for (const auto& c : n.children) trace_text_rec(c, out);
}

}  // namespace

std::string trace_to_text(const InterpolationTrace& t) {
    std::string out;
    trace_text_rec(t, out);
    return out;
}

}  // namespace k5kit
