#include "k5kit/sequent.hpp"

#include <algorithm>
#include <stdexcept>

namespace k5kit {

std::string Label::str() const {
    switch (kind) {
        case Kind::Trunk: return "@.";
        case Kind::Bracket: return "@." + std::to_string(index);
        case Kind::PlaceholderBracket: return "@.d";
        case Kind::Double: return "@" + std::to_string(index);
        case Kind::PlaceholderDouble: return "@d";
    }
    return "?";
}

const LayeredSequent::Component* LayeredSequent::find(const Label& label) const {
    for (const auto& c : comps_)
        if (c.label == label) return &c;
    return nullptr;
}

LayeredSequent::Component* LayeredSequent::find(const Label& label) {
    for (auto& c : comps_)
        if (c.label == label) return &c;
    return nullptr;
}

void LayeredSequent::ensure_component(const Label& label) {
    if (find(label)) return;
    auto pos = std::lower_bound(comps_.begin(), comps_.end(), label,
                                [](const Component& c, const Label& l) { return c.label < l; });
    comps_.insert(pos, Component{label, {}});
}

bool LayeredSequent::add(const Label& label, const Formula& f) {
    ensure_component(label);
    Component* c = find(label);
    for (const auto& g : c->formulas)
        if (g == f) return false;
    c->formulas.push_back(f);
    return true;
}

bool LayeredSequent::contains(const Label& label, const Formula& f) const {
    const Component* c = find(label);
    if (!c) return false;
    for (const auto& g : c->formulas)
        if (g == f) return true;
    return false;
}

const std::vector<Formula>* LayeredSequent::formulas(const Label& label) const {
    const Component* c = find(label);
    return c ? &c->formulas : nullptr;
}

std::vector<Label> LayeredSequent::labels() const {
    std::vector<Label> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) out.push_back(c.label);
    return out;
}

size_t LayeredSequent::labeled_formula_count() const {
    size_t n = 0;
    for (const auto& c : comps_) n += c.formulas.size();
    return n;
}

int LayeredSequent::n() const {
    return find(Label::trunk()) ? 1 : 0;
}

int LayeredSequent::m() const {
    int m = 0;
    for (const auto& c : comps_) m += c.label.is_bracket_kind() ? 1 : 0;
    return m;
}

int LayeredSequent::k() const {
    int k = 0;
    for (const auto& c : comps_) k += c.label.is_double_kind() ? 1 : 0;
    return k;
}

int LayeredSequent::fresh_bracket_index() const {
    int i = 1;
    while (find(Label::bracket(i))) i++;
    return i;
}

int LayeredSequent::fresh_double_index() const {
    int i = 1;
    while (find(Label::dbl(i))) i++;
    return i;
}

void LayeredSequent::rename(const Label& from, const Label& to) {
    if (find(to)) throw std::logic_error("rename target label already in use: " + to.str());
    Component* c = find(from);
    if (!c) throw std::logic_error("rename source label missing: " + from.str());
    Component moved = std::move(*c);
    moved.label = to;
    comps_.erase(std::remove_if(comps_.begin(), comps_.end(),
                                [&](const Component& x) { return x.label == from; }),
                 comps_.end());
    auto pos = std::lower_bound(comps_.begin(), comps_.end(), to,
                                [](const Component& x, const Label& l) { return x.label < l; });
    comps_.insert(pos, std::move(moved));
}

size_t LayeredSequent::subformula_count() const {
    std::set<Formula> subs;
    for (const auto& c : comps_)
        for (const auto& f : c.formulas) collect_subformulas(f, subs);
    return subs.size();
}

bool operator==(const LayeredSequent& a, const LayeredSequent& b) {
    if (a.comps_.size() != b.comps_.size()) return false;
    for (size_t i = 0; i < a.comps_.size(); ++i) {
        const auto& ca = a.comps_[i];
        const auto& cb = b.comps_[i];
        if (!(ca.label == cb.label)) return false;
        // components are unordered sets; insertion order is incidental
        if (ca.formulas.size() != cb.formulas.size()) return false;
        for (const auto& f : ca.formulas)
            if (!b.contains(cb.label, f)) return false;
    }
    return true;
}

std::string LayeredSequent::str(bool verbose) const {
    if (comps_.empty()) return "<empty>";
    std::string out;
    bool first = true;
    for (const auto& c : comps_) {
        if (!first) out += ", ";
        first = false;
        std::string body;
        for (size_t i = 0; i < c.formulas.size(); ++i) {
            if (i) body += ", ";
            body += c.formulas[i].str();
        }
        if (c.label.is_trunk())
            out += verbose ? "{" + body + "}" : body;
        else if (c.label.is_bracket_kind())
            out += "[" + body + "]";
        else
            out += "[[" + body + "]]";
        if (verbose) out += c.label.str();
    }
    return out;
}

namespace {

Formula disjoin_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return Formula::bottom();
    Formula out = fs.front();
    for (size_t i = 1; i < fs.size(); ++i) out = Formula::disj(out, fs[i]);
    return out;
}

}  // namespace

Formula iota(const LayeredSequent& g) {
    std::vector<Formula> parts;
    for (const auto& c : g.components()) {
        Formula body = disjoin_all(c.formulas);
        if (c.label.is_trunk())
            parts.push_back(body);
        else if (c.label.is_bracket_kind())
            parts.push_back(Formula::box(body));
        else
            parts.push_back(Formula::box(Formula::box(body)));
    }
    return disjoin_all(parts);
}

bool is_l_sequent(const LayeredSequent& g, Logic logic) {
    int n = g.n(), m = g.m(), k = g.k();
    if (k >= 1 && m < 1) return false;
    switch (logic) {
        case Logic::K5:
        case Logic::KD5:
            return n >= 1;
        case Logic::K45:
        case Logic::KD45:
            return n >= 1 && k == 0;
        case Logic::KB5:
            return (n == 0 && m >= 2 && k == 0) || (n == 1 && m == 0 && k == 0);
        case Logic::S5:
            return n == 0 && m >= 1 && k == 0;
    }
    return false;
}

std::string Obligation::str() const {
    switch (kind) {
        case Kind::AndSplit: return "and-unsaturated";
        case Kind::OrExpand: return "or-unsaturated";
        case Kind::BoxBracket: return "box-bracket-missing";
        case Kind::BoxDouble: return "box-double-missing";
        case Kind::DiaAt: return "dia-unsaturated-wrt-" + (target ? target->str() : "?");
        case Kind::DTrunk: return "d_t-unsaturated";
        case Kind::DCrown: return "d_c-unsaturated";
        case Kind::DCrownDouble: return "d_c'-unsaturated";
    }
    return "?";
}

namespace {

bool has_bracket_witness(const LayeredSequent& g, const Formula& f) {
    for (const auto& c : g.components())
        if (c.label.is_bracket_kind())
            for (const auto& x : c.formulas)
                if (x == f) return true;
    return false;
}

bool has_double_witness(const LayeredSequent& g, const Formula& f) {
    for (const auto& c : g.components())
        if (c.label.is_double_kind())
            for (const auto& x : c.formulas)
                if (x == f) return true;
    return false;
}

// Whether the box rule available for (label, logic) creates a [ ]-component
// (Box_t, Box_t', Box_c) rather than a [[ ]]-component (Box_c').
bool box_makes_bracket(const Label& label, Logic logic) {
    if (label.is_trunk()) return true;
    return logic == Logic::K45 || logic == Logic::KD45 || logic == Logic::KB5 ||
           logic == Logic::S5;
}

}  // namespace

std::vector<UnsaturatedItem> unsaturated_items(const LayeredSequent& g, Logic logic) {
    std::vector<UnsaturatedItem> out;
    bool has_dia_t = logic == Logic::K5 || logic == Logic::KD5 || logic == Logic::K45 ||
                     logic == Logic::KD45;
    bool has_d_t = logic == Logic::KD5 || logic == Logic::KD45;
    bool has_d_c = logic == Logic::KD45;
    bool has_d_cp = logic == Logic::KD5;

    auto labels = g.labels();
    for (const auto& comp : g.components()) {
        const Label& sigma = comp.label;
        for (const auto& f : comp.formulas) {
            switch (f.kind()) {
                case Conn::Top:
                case Conn::Bottom:
                case Conn::Lit:
                    break;
                case Conn::And:
                    if (!g.contains(sigma, f.lhs()) && !g.contains(sigma, f.rhs()))
                        out.push_back({sigma, f, {Obligation::Kind::AndSplit, {}}});
                    break;
                case Conn::Or:
                    if (!g.contains(sigma, f.lhs()) || !g.contains(sigma, f.rhs()))
                        out.push_back({sigma, f, {Obligation::Kind::OrExpand, {}}});
                    break;
                case Conn::Box: {
                    if (box_makes_bracket(sigma, logic)) {
                        if (!has_bracket_witness(g, f.child()))
                            out.push_back({sigma, f, {Obligation::Kind::BoxBracket, {}}});
                    } else {
                        if (!has_double_witness(g, f.child()))
                            out.push_back({sigma, f, {Obligation::Kind::BoxDouble, {}}});
                    }
                    break;
                }
                case Conn::Dia: {
                    for (const auto& tau : labels) {
                        if (tau.is_trunk()) continue;  // always saturated wrt the trunk
                        if (sigma.is_trunk()) {
                            if (tau.is_double_kind()) continue;  // no rule reaches there
                            if (!has_dia_t) continue;            // KB5 has no trunk diamond rule
                        }
                        if (!g.contains(tau, f.child()))
                            out.push_back({sigma, f, {Obligation::Kind::DiaAt, tau}});
                    }
                    if (sigma.is_trunk()) {
                        if (has_d_t && !has_bracket_witness(g, f.child()))
                            out.push_back({sigma, f, {Obligation::Kind::DTrunk, {}}});
                    } else {
                        if (has_d_c && !has_bracket_witness(g, f.child()))
                            out.push_back({sigma, f, {Obligation::Kind::DCrown, {}}});
                        if (has_d_cp && !has_double_witness(g, f.child()))
                            out.push_back({sigma, f, {Obligation::Kind::DCrownDouble, {}}});
                    }
                    break;
                }
            }
        }
    }
    return out;
}

std::optional<Label> is_closed(const LayeredSequent& g) {
    for (const auto& comp : g.components()) {
        for (const auto& f : comp.formulas)
            if (f.is(Conn::Top)) return comp.label;
        for (const auto& f : comp.formulas)
            if (f.is(Conn::Lit) && g.contains(comp.label, Formula::lit(f.literal().negate())))
                return comp.label;
    }
    return std::nullopt;
}

}  // namespace k5kit
