#pragma once

#include <array>
#include <cstdio>
#include <sys/wait.h>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "k5kit/formula.hpp"
#include "k5kit/kripke.hpp"
#include "k5kit/multiformula.hpp"
#include "k5kit/verification.hpp"

namespace k5kit::testing {

inline Formula F(const std::string& text) { return parse_formula(text); }

inline std::vector<Literal> literal_pool(const std::vector<std::string>& atoms) {
    std::vector<Literal> pool;
    for (const auto& a : atoms) {
        pool.emplace_back(a, false);
        pool.emplace_back(a, true);
    }
    return pool;
}

inline std::vector<Formula> random_corpus(uint64_t seed, int count, int max_connectives,
                                          const std::vector<std::string>& atoms) {
    std::mt19937_64 rng(seed);
    auto pool = literal_pool(atoms);
    std::vector<Formula> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        int c = static_cast<int>(rng() % (max_connectives + 1));
        out.push_back(random_formula(rng, c, pool));
    }
    return out;
}

/// Every valid interpretation of the label set into the model.
inline std::vector<Interpretation> enumerate_interpretations(const KripkeModel& m,
                                                             const std::vector<Label>& labels) {
    std::vector<Interpretation> out;
    std::map<Label, WorldId> current;
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == labels.size()) {
            if (interpretation_ok(m, current)) out.push_back(Interpretation{current});
            return;
        }
        for (const auto& w : m.worlds) {
            current[labels[i]] = w;
            self(self, i + 1);
        }
        current.erase(labels[i]);
    };
    rec(rec, 0);
    return out;
}

struct CliResult {
    int exit_code;
    std::string out;
};

/// Runs the CLI through the shell; arguments must already be quoted.
inline CliResult run_cli(const std::string& cli_path, const std::string& args) {
    std::string cmd = cli_path + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    CliResult res{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

inline std::string shellquote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

}  // namespace k5kit::testing
