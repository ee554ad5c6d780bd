#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "k5kit/formula.hpp"
#include "k5kit/interpolation.hpp"
#include "k5kit/kripke.hpp"
#include "k5kit/prover.hpp"
#include "k5kit/verification.hpp"

namespace {

using namespace k5kit;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;

size_t node_cap_default() {
    if (const char* env = std::getenv("K5KIT_NODE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
        std::cerr << "warning: ignoring malformed K5KIT_NODE_CAP\n";
    }
    return kDefaultNodeCap;
}

Formula parse_or_die(const std::string& text) {
    try {
        return parse_formula(text);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::exit(kExitError);
    }
}

Logic logic_or_die(const std::string& name) {
    if (auto l = logic_from_name(name)) return *l;
    std::cerr << "error: unknown logic '" << name << "' (expected k5, kd5, k45, kd45, kb5, s5)\n";
    std::exit(kExitError);
}

Literal literal_or_die(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && s[0] == '~') {
        neg = true;
        s = s.substr(1);
    }
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) {
        std::cerr << "error: malformed literal '" << text << "' (expected p or ~p)\n";
        std::exit(kExitError);
    }
    return Literal(s, neg);
}

int cmd_decide(const std::string& formula_text, const std::string& logic_name, bool show_proof,
               bool show_countermodel, bool json_out) {
    Logic logic = logic_or_die(logic_name);
    Formula f = parse_or_die(formula_text);
    DecideResult res = decide(f, logic);

    if (json_out) {
        nlohmann::json j;
        j["formula"] = f.str();
        j["logic"] = k5kit::logic_name(logic);
        j["result"] = res.valid ? "valid" : "invalid";
        if (res.valid && show_proof) j["proof"] = nlohmann::json::parse(proof_to_json(*res.proof));
        if (!res.valid && show_countermodel)
            j["countermodel"] = nlohmann::json::parse(model_to_json(*res.countermodel));
        std::cout << j.dump() << "\n";
    } else {
        std::cout << (res.valid ? "valid" : "invalid") << "\n";
        if (res.valid && show_proof) std::cout << proof_to_text(*res.proof);
        if (!res.valid && show_countermodel)
            std::cout << model_to_json(*res.countermodel) << "\n";
    }
    return res.valid ? kExitYes : kExitNo;
}

int cmd_interpolate(const std::string& formula_text, const std::string& logic_name,
                    const std::string& literal_text, const std::string& atom, bool check,
                    bool trace, uint64_t seed, int jobs, size_t cap) {
    if (logic_or_die(logic_name) != Logic::K5) {
        std::cerr << "error: interpolation implemented for K5 only\n";
        return kExitError;
    }
    if (literal_text.empty() == atom.empty()) {
        std::cerr << "error: exactly one of --literal / --atom is required\n";
        return kExitError;
    }
    Formula f = parse_or_die(formula_text);
    InterpolationOptions opts{cap};

    try {
        Formula result = Formula::top();
        Literal check_lit("", false);
        if (!literal_text.empty()) {
            Literal ell = literal_or_die(literal_text);
            check_lit = ell;
            auto r = uniform_lyndon_interpolant_traced(f, ell, opts);
            if (trace) std::cout << trace_to_text(r.trace);
            result = r.interpolant;
        } else {
            check_lit = Literal(atom, false);
            if (trace) {
                auto stage1 = uniform_lyndon_interpolant_traced(f, Literal(atom, true), opts);
                std::cout << trace_to_text(stage1.trace);
                auto stage2 =
                    uniform_lyndon_interpolant_traced(stage1.interpolant, Literal(atom, false), opts);
                std::cout << trace_to_text(stage2.trace);
                result = stage2.interpolant;
            } else {
                result = uniform_interpolant(f, atom, opts);
            }
        }
        std::cout << result.str() << "\n";
        if (check) {
            UlipConfig cfg;
            cfg.seed = seed;
            cfg.jobs = jobs;
            cfg.both_polarities = literal_text.empty();
            UlipReport report = check_ulip(f, check_lit, result, cfg);
            std::cout << report.to_json() << "\n";
            return report.pass() ? kExitYes : kExitNo;
        }
        return kExitYes;
    } catch (const NodeCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_verify(const std::string& formula_text, const std::string& literal_text, int psi_depth,
               int samples, uint64_t seed, int jobs, size_t cap) {
    Formula f = parse_or_die(formula_text);
    Literal ell = literal_or_die(literal_text);
    try {
        Formula interp = uniform_lyndon_interpolant(f, ell, InterpolationOptions{cap});
        UlipConfig cfg;
        cfg.exhaustive_connectives = psi_depth;
        cfg.random_count = samples;
        cfg.seed = seed;
        cfg.jobs = jobs;
        UlipReport report = check_ulip(f, ell, interp, cfg);
        nlohmann::json j = nlohmann::json::parse(report.to_json());
        j["interpolant"] = interp.str();
        std::cout << j.dump() << "\n";
        return report.pass() ? kExitYes : kExitNo;
    } catch (const NodeCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_model_eval(const std::string& model_path, const std::string& world,
                   const std::string& formula_text) {
    std::ifstream in(model_path);
    if (!in) {
        std::cerr << "error: cannot open " << model_path << "\n";
        return kExitError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        KripkeModel m = model_from_json(buf.str());
        Formula f = parse_or_die(formula_text);
        return eval(m, world, f) ? kExitYes : kExitNo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k5kit: decision procedures and uniform interpolation for the K5 family"};
    app.require_subcommand(1);

    std::string formula, logic = "k5", literal, atom, model_path, world;
    bool proof = false, countermodel = false, json_out = false, check = false, trace = false;
    uint64_t seed = 0;
    int psi_depth = 3, samples = 200, jobs = 1;
    size_t cap = node_cap_default();

    auto* dec = app.add_subcommand("decide", "decide validity in one of the six logics");
    dec->add_option("--logic", logic, "k5|kd5|k45|kd45|kb5|s5")->required();
    dec->add_flag("--proof", proof, "print the proof when valid");
    dec->add_flag("--countermodel", countermodel, "print a countermodel when invalid");
    dec->add_flag("--json", json_out, "emit a single JSON document");
    dec->add_option("formula", formula, "formula (quoted)")->required();

    auto* itp = app.add_subcommand("interpolate", "uniform (Lyndon) interpolants for K5");
    itp->add_option("--logic", logic, "must be k5");
    itp->add_option("--literal", literal, "literal to eliminate (p or ~p)");
    itp->add_option("--atom", atom, "atom to eliminate (both polarities)");
    itp->add_flag("--check", check, "verify the interpolant conditions");
    itp->add_flag("--trace", trace, "dump the construction trace");
    itp->add_option("--seed", seed, "seed for the --check sampling");
    itp->add_option("--jobs", jobs, "parallel psi checking");
    itp->add_option("--node-cap", cap, "multiformula node cap");
    itp->add_option("formula", formula, "formula (quoted)")->required();

    auto* ver = app.add_subcommand("verify", "compute an interpolant and check it");
    ver->add_option("--literal", literal, "literal to eliminate (p or ~p)")->required();
    ver->add_option("--psi-depth", psi_depth, "exhaustive psi connective bound");
    ver->add_option("--samples", samples, "random psi count");
    ver->add_option("--seed", seed, "sampling seed");
    ver->add_option("--jobs", jobs, "parallel psi checking");
    ver->add_option("--node-cap", cap, "multiformula node cap");
    ver->add_option("formula", formula, "formula (quoted)")->required();

    auto* mev = app.add_subcommand("model-eval", "evaluate a formula in a JSON model");
    mev->add_option("model", model_path, "model JSON file")->required();
    mev->add_option("world", world, "world id")->required();
    mev->add_option("formula", formula, "formula (quoted)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (dec->parsed()) return cmd_decide(formula, logic, proof, countermodel, json_out);
        if (itp->parsed())
            return cmd_interpolate(formula, logic, literal, atom, check, trace, seed, jobs, cap);
        if (ver->parsed())
            return cmd_verify(formula, literal, psi_depth, samples, seed, jobs, cap);
        if (mev->parsed()) return cmd_model_eval(model_path, world, formula);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
