#include "k5kit/prover.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace k5kit {

std::string rule_name(RuleId r) {
    switch (r) {
        case RuleId::IdP: return "id_P";
        case RuleId::IdTop: return "id_T";
        case RuleId::And: return "and";
        case RuleId::Or: return "or";
        case RuleId::BoxT: return "box_t";
        case RuleId::BoxTPrime: return "box_t'";
        case RuleId::BoxC: return "box_c";
        case RuleId::BoxCPrime: return "box_c'";
        case RuleId::DiaT: return "dia_t";
        case RuleId::DiaC: return "dia_c";
        case RuleId::T: return "t";
        case RuleId::DT: return "d_t";
        case RuleId::DC: return "d_c";
        case RuleId::DCPrime: return "d_c'";
    }
    return "?";
}

std::vector<RuleId> rule_set(Logic logic) {
    std::vector<RuleId> rules = {RuleId::IdP, RuleId::IdTop, RuleId::And,
                                 RuleId::Or,  RuleId::DiaC,  RuleId::T};
    switch (logic) {
        case Logic::K5:
            rules.insert(rules.end(), {RuleId::BoxT, RuleId::DiaT, RuleId::BoxCPrime});
            break;
        case Logic::KD5:
            rules.insert(rules.end(), {RuleId::BoxT, RuleId::DiaT, RuleId::BoxCPrime,
                                       RuleId::DT, RuleId::DCPrime});
            break;
        case Logic::K45:
            rules.insert(rules.end(), {RuleId::BoxT, RuleId::DiaT, RuleId::BoxC});
            break;
        case Logic::KD45:
            rules.insert(rules.end(),
                         {RuleId::BoxT, RuleId::DiaT, RuleId::BoxC, RuleId::DT, RuleId::DC});
            break;
        case Logic::KB5:
            rules.insert(rules.end(), {RuleId::BoxTPrime, RuleId::BoxC});
            break;
        case Logic::S5:
            rules.push_back(RuleId::BoxC);
            break;
    }
    return rules;
}

namespace {

bool rule_allowed(RuleId r, Logic logic) {
    auto rules = rule_set(logic);
    return std::find(rules.begin(), rules.end(), r) != rules.end();
}

}  // namespace

RuleApplication apply_rule(const LayeredSequent& g, const UnsaturatedItem& item, Logic logic) {
    const Label& sigma = item.label;
    const Formula& f = item.formula;
    RuleApplication app;

    switch (item.obligation.kind) {
        case Obligation::Kind::AndSplit: {
            app.rule = RuleId::And;
            LayeredSequent left = g, right = g;
            left.add(sigma, f.lhs());
            right.add(sigma, f.rhs());
            app.premises = {std::move(left), std::move(right)};
            break;
        }
        case Obligation::Kind::OrExpand: {
            app.rule = RuleId::Or;
            LayeredSequent p = g;
            p.add(sigma, f.lhs());
            p.add(sigma, f.rhs());
            app.premises = {std::move(p)};
            break;
        }
        case Obligation::Kind::BoxBracket: {
            if (sigma.is_trunk() && logic == Logic::KB5) {
                // the whole trunk moves into the crown, plus a fresh witness
                if (g.m() != 0 || g.k() != 0)
                    throw std::logic_error("box_t' needs a trunk-only sequent");
                app.rule = RuleId::BoxTPrime;
                LayeredSequent p;
                const auto* trunk = g.formulas(Label::trunk());
                for (const auto& x : *trunk) p.add(Label::bracket(1), x);
                p.add(Label::bracket(2), f.child());
                app.premises = {std::move(p)};
            } else {
                app.rule = sigma.is_trunk() ? RuleId::BoxT : RuleId::BoxC;
                LayeredSequent p = g;
                p.add(Label::bracket(p.fresh_bracket_index()), f.child());
                app.premises = {std::move(p)};
            }
            break;
        }
        case Obligation::Kind::BoxDouble: {
            app.rule = RuleId::BoxCPrime;
            LayeredSequent p = g;
            p.add(Label::dbl(p.fresh_double_index()), f.child());
            app.premises = {std::move(p)};
            break;
        }
        case Obligation::Kind::DiaAt: {
            const Label& tau = *item.obligation.target;
            app.rule = sigma.is_trunk() ? RuleId::DiaT : (tau == sigma ? RuleId::T : RuleId::DiaC);
            LayeredSequent p = g;
            p.add(tau, f.child());
            app.premises = {std::move(p)};
            break;
        }
        case Obligation::Kind::DTrunk:
        case Obligation::Kind::DCrown: {
            app.rule = item.obligation.kind == Obligation::Kind::DTrunk ? RuleId::DT : RuleId::DC;
            LayeredSequent p = g;
            p.add(Label::bracket(p.fresh_bracket_index()), f.child());
            app.premises = {std::move(p)};
            break;
        }
        case Obligation::Kind::DCrownDouble: {
            app.rule = RuleId::DCPrime;
            LayeredSequent p = g;
            p.add(Label::dbl(p.fresh_double_index()), f.child());
            app.premises = {std::move(p)};
            break;
        }
    }

    if (!rule_allowed(app.rule, logic))
        throw std::logic_error("rule " + rule_name(app.rule) + " not available in " +
                               logic_name(logic));
    for (const auto& p : app.premises)
        if (p.labeled_formula_count() <= g.labeled_formula_count())
            throw std::logic_error("rule application did not grow the sequent");
    return app;
}

namespace {

struct Searcher {
    Logic logic;
    SearchStats stats;
    std::optional<LayeredSequent> refuted;

    std::optional<ProofTree> run(const LayeredSequent& g) {
        stats.visited++;
        stats.max_branch_formulas = std::max(stats.max_branch_formulas, g.labeled_formula_count());
        if (g.labeled_formula_count() > stats.branch_bound)
            throw std::logic_error("branch exceeded the s(N+2s) bound");

        if (auto closed = is_closed(g)) {
            const auto* fs = g.formulas(*closed);
            bool top = std::any_of(fs->begin(), fs->end(),
                                   [](const Formula& f) { return f.is(Conn::Top); });
            return ProofTree{top ? RuleId::IdTop : RuleId::IdP, *closed, std::nullopt, {}};
        }

        auto items = unsaturated_items(g, logic);
        if (items.empty()) {
            refuted = g;  // first saturated open leaf in deterministic order
            return std::nullopt;
        }

        // branch on a conjunction only when nothing single-premise is left;
        // within each tier the (label, insertion) order stays authoritative
        const UnsaturatedItem* chosen = &items.front();
        if (chosen->obligation.kind == Obligation::Kind::AndSplit)
            for (const auto& item : items)
                if (item.obligation.kind != Obligation::Kind::AndSplit) {
                    chosen = &item;
                    break;
                }

        auto app = apply_rule(g, *chosen, logic);
        ProofTree node{app.rule, chosen->label, chosen->formula, {}};
        for (const auto& premise : app.premises) {
            auto sub = run(premise);
            if (!sub) return std::nullopt;
            node.premises.push_back(std::move(*sub));
        }
        return node;
    }
};

}  // namespace

SearchOutcome prove(const LayeredSequent& g, Logic logic) {
    if (!is_l_sequent(g, logic))
        throw std::invalid_argument("not a valid " + logic_name(logic) + "-sequent: " + g.str());
    Searcher s;
    s.logic = logic;
    size_t subs = g.subformula_count();
    s.stats.branch_bound = subs * (g.components().size() + 2 * subs);

    SearchOutcome out;
    out.proof = s.run(g);
    out.refuted = std::move(s.refuted);
    out.stats = s.stats;
    return out;
}

LayeredSequent initial_sequent(const Formula& f, Logic logic) {
    LayeredSequent g;
    g.add(start_label(logic), f);
    return g;
}

Label start_label(Logic logic) {
    return logic == Logic::S5 ? Label::bracket(1) : Label::trunk();
}

std::pair<KripkeModel, Interpretation> countermodel_from_leaf(const LayeredSequent& leaf,
                                                              Logic logic) {
    if (is_closed(leaf) || !unsaturated_items(leaf, logic).empty())
        throw std::invalid_argument("countermodel requires a saturated open leaf");

    KripkeModel model;
    std::vector<WorldId> crown;
    std::optional<WorldId> trunk_world;
    for (const auto& c : leaf.components()) {
        WorldId w = c.label.str();
        model.worlds.push_back(w);
        if (c.label.is_trunk())
            trunk_world = w;
        else
            crown.push_back(w);
    }

    // serial logics must not end up with a bare irreflexive root
    bool pad = crown.empty() && (logic == Logic::KD5 || logic == Logic::KD45);
    if (pad) {
        model.worlds.push_back("c");
        crown.push_back("c");
    }

    for (const auto& c : leaf.components())
        if (c.label.is_bracket_kind() && trunk_world)
            model.relation.insert({*trunk_world, c.label.str()});
    if (pad && trunk_world) model.relation.insert({*trunk_world, "c"});
    for (const auto& a : crown)
        for (const auto& b : crown) model.relation.insert({a, b});

    for (const auto& c : leaf.components())
        for (const auto& f : c.formulas)
            if (f.is(Conn::Lit) && f.literal().negated)
                model.valuation[f.literal().atom].insert(c.label.str());

    // for a crown-only leaf the first crown world acts as the root
    model.root = trunk_world ? *trunk_world : crown.front();

    std::map<Label, WorldId> mapping;
    for (const auto& c : leaf.components()) mapping[c.label] = c.label.str();
    if (!trunk_world && logic == Logic::KB5) mapping[Label::trunk()] = model.root;
    Interpretation interp = Interpretation::checked(model, std::move(mapping));

    for (const auto& c : leaf.components())
        for (const auto& f : c.formulas)
            if (eval(model, interp.at(c.label), f))
                throw std::logic_error("countermodel fails to refute " + f.str() + " at " +
                                       c.label.str());
    if (!is_l_frame(model, logic))
        throw std::logic_error("extracted countermodel is not an " + logic_name(logic) + "-frame");
    return {std::move(model), std::move(interp)};
}

DecideResult decide(const Formula& f, Logic logic) {
    DecideResult res;
    res.start = start_label(logic);
    auto outcome = prove(initial_sequent(f, logic), logic);
    res.stats = outcome.stats;
    if (outcome.proved()) {
        res.valid = true;
        res.proof = std::move(outcome.proof);
        return res;
    }
    auto [model, interp] = countermodel_from_leaf(*outcome.refuted, logic);
    if (eval(model, interp.at(res.start), f))
        throw std::logic_error("countermodel does not falsify the input at the start label");
    res.valid = false;
    res.countermodel = std::move(model);
    res.interpretation = std::move(interp);
    return res;
}

namespace {

void proof_text_rec(const ProofTree& t, int depth, std::string& out) {
    out.append(static_cast<size_t>(depth) * 2, ' ');
    out += rule_name(t.rule);
    out += " " + t.label.str();
    if (t.principal) out += " : " + t.principal->str();
    out += "\n";
    for (const auto& p : t.premises) proof_text_rec(p, depth + 1, out);
}

nlohmann::json proof_json_rec(const ProofTree& t) {
    nlohmann::json j;
    j["rule"] = rule_name(t.rule);
    j["label"] = t.label.str();
    j["principal"] = t.principal ? nlohmann::json(t.principal->str()) : nlohmann::json(nullptr);
    auto arr = nlohmann::json::array();
    for (const auto& p : t.premises) arr.push_back(proof_json_rec(p));
    j["premises"] = arr;
    return j;
}

}  // namespace

std::string proof_to_text(const ProofTree& t) {
    std::string out;
    proof_text_rec(t, 0, out);
    return out;
}

std::string proof_to_json(const ProofTree& t) { return proof_json_rec(t).dump(); }

}  // namespace k5kit
