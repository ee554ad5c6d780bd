#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace k5kit {

/// A propositional atom or its negation. Formulas are kept in negation
/// normal form, so this is the only place a negation can live.
struct Literal {
    std::string atom;
    bool negated = false;

    Literal() = default;
    Literal(std::string a, bool n) : atom(std::move(a)), negated(n) {}

    Literal negate() const { return Literal(atom, !negated); }

    friend bool operator==(const Literal& a, const Literal& b) {
        return a.negated == b.negated && a.atom == b.atom;
    }
    friend auto operator<=>(const Literal& a, const Literal& b) {
        if (auto c = a.atom <=> b.atom; c != 0) return c;
        return a.negated <=> b.negated;
    }

    std::string str() const { return negated ? "~" + atom : atom; }
};

enum class Conn : uint8_t { Top, Bottom, Lit, And, Or, Box, Dia };

/// Immutable modal formula in negation normal form. Copies share structure;
/// equality and ordering are structural.
class Formula {
  public:
    struct Node;

    Formula();

    static Formula top();
    static Formula bottom();
    static Formula lit(Literal l);
    static Formula atom(std::string name) { return lit(Literal(std::move(name), false)); }
    static Formula neg_atom(std::string name) { return lit(Literal(std::move(name), true)); }
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula box(Formula a);
    static Formula dia(Formula a);

    Conn kind() const;
    bool is(Conn k) const { return kind() == k; }
    const Literal& literal() const;
    const Formula& lhs() const;
    const Formula& rhs() const;
    const Formula& child() const { return lhs(); }

    uint64_t hash() const;
    uint32_t size() const;

    bool is_modal() const { return is(Conn::Box) || is(Conn::Dia); }

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

    /// Deterministic structural total order (kind, then payload, then children).
    static int compare(const Formula& a, const Formula& b);
    friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

    std::string str() const;

  private:
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Conn kind;
    Literal lit;       // Conn::Lit only
    Formula lhs, rhs;  // And/Or both, Box/Dia lhs only
    uint64_t hash = 0;
    uint32_t size = 1;  // node count

    Node(Conn k, Literal l, Formula a, Formula b, uint32_t s)
        : kind(k), lit(std::move(l)), lhs(std::move(a)), rhs(std::move(b)), size(s) {}
};

inline Formula::Formula() : Formula(top()) {}
inline Conn Formula::kind() const { return node_->kind; }
inline const Literal& Formula::literal() const { return node_->lit; }
inline const Formula& Formula::lhs() const { return node_->lhs; }
inline const Formula& Formula::rhs() const { return node_->rhs; }
inline uint64_t Formula::hash() const { return node_->hash; }
inline uint32_t Formula::size() const { return node_->size; }

/// De Morgan negation; an involution on NNF formulas.
Formula negate(const Formula& f);

/// Polarity-sensitive literal set: p and ~p are distinct members.
std::set<Literal> literals(const Formula& f);

/// All distinct subformulas of f, including f itself.
void collect_subformulas(const Formula& f, std::set<Formula>& out);
size_t subformula_count(const Formula& f);

struct ParseError : std::runtime_error {
    size_t offset;
    std::vector<std::string> expected;
    ParseError(std::string msg, size_t off, std::vector<std::string> exp);
};

/// Parses the ASCII grammar (constants T/F, atoms, ~ [] <> & | ->, parens).
/// `~` and `->` are compiled away; the result is already in NNF.
Formula parse_formula(std::string_view text);

/// Round-trips: parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

}  // namespace k5kit
