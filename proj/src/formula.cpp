#include "k5kit/formula.hpp"

#include <cctype>
#include <sstream>

namespace k5kit {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

uint64_t hash_string(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::shared_ptr<const Formula::Node> make_node(Conn kind, Literal lit, Formula l, Formula r,
                                               uint32_t size) {
    auto n = std::make_shared<Formula::Node>(kind, std::move(lit), std::move(l), std::move(r),
                                             size);
    uint64_t h = mix(0, static_cast<uint64_t>(kind));
    switch (kind) {
        case Conn::Lit:
            h = mix(h, hash_string(n->lit.atom));
            h = mix(h, n->lit.negated ? 2 : 1);
            break;
        case Conn::And:
        case Conn::Or:
            h = mix(h, n->lhs.hash());
            h = mix(h, n->rhs.hash());
            break;
        case Conn::Box:
        case Conn::Dia:
            h = mix(h, n->lhs.hash());
            break;
        default:
            break;
    }
    n->hash = h;
    return n;
}

}  // namespace

Formula Formula::top() {
    static const Formula f(make_node(Conn::Top, {}, Formula(nullptr), Formula(nullptr), 1));
    return f;
}

Formula Formula::bottom() {
    static const Formula f(make_node(Conn::Bottom, {}, Formula(nullptr), Formula(nullptr), 1));
    return f;
}

Formula Formula::lit(Literal l) {
    return Formula(make_node(Conn::Lit, std::move(l), Formula(nullptr), Formula(nullptr), 1));
}

Formula Formula::conj(Formula a, Formula b) {
    uint32_t sz = a.size() + b.size() + 1;
    return Formula(make_node(Conn::And, {}, std::move(a), std::move(b), sz));
}

Formula Formula::disj(Formula a, Formula b) {
    uint32_t sz = a.size() + b.size() + 1;
    return Formula(make_node(Conn::Or, {}, std::move(a), std::move(b), sz));
}

Formula Formula::box(Formula a) {
    uint32_t sz = a.size() + 1;
    return Formula(make_node(Conn::Box, {}, std::move(a), Formula(nullptr), sz));
}

Formula Formula::dia(Formula a) {
    uint32_t sz = a.size() + 1;
    return Formula(make_node(Conn::Dia, {}, std::move(a), Formula(nullptr), sz));
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
    switch (a.kind()) {
        case Conn::Top:
        case Conn::Bottom:
            return true;
        case Conn::Lit:
            return a.literal() == b.literal();
        case Conn::And:
        case Conn::Or:
            return a.lhs() == b.lhs() && a.rhs() == b.rhs();
        case Conn::Box:
        case Conn::Dia:
            return a.child() == b.child();
    }
    return false;
}

int Formula::compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case Conn::Top:
        case Conn::Bottom:
            return 0;
        case Conn::Lit: {
            if (a.literal() == b.literal()) return 0;
            return a.literal() < b.literal() ? -1 : 1;
        }
        case Conn::And:
        case Conn::Or: {
            int c = compare(a.lhs(), b.lhs());
            return c != 0 ? c : compare(a.rhs(), b.rhs());
        }
        case Conn::Box:
        case Conn::Dia:
            return compare(a.child(), b.child());
    }
    return 0;
}

Formula negate(const Formula& f) {
    switch (f.kind()) {
        case Conn::Top:
            return Formula::bottom();
        case Conn::Bottom:
            return Formula::top();
        case Conn::Lit:
            return Formula::lit(f.literal().negate());
        case Conn::And:
            return Formula::disj(negate(f.lhs()), negate(f.rhs()));
        case Conn::Or:
            return Formula::conj(negate(f.lhs()), negate(f.rhs()));
        case Conn::Box:
            return Formula::dia(negate(f.child()));
        case Conn::Dia:
            return Formula::box(negate(f.child()));
    }
    return Formula::top();
}

namespace {

void collect_literals(const Formula& f, std::set<Literal>& out) {
    switch (f.kind()) {
        case Conn::Top:
        case Conn::Bottom:
            return;
        case Conn::Lit:
            out.insert(f.literal());
            return;
        case Conn::And:
        case Conn::Or:
            collect_literals(f.lhs(), out);
            collect_literals(f.rhs(), out);
            return;
        case Conn::Box:
        case Conn::Dia:
            collect_literals(f.child(), out);
            return;
    }
}

}  // namespace

std::set<Literal> literals(const Formula& f) {
    std::set<Literal> out;
    collect_literals(f, out);
    return out;
}

void collect_subformulas(const Formula& f, std::set<Formula>& out) {
    if (!out.insert(f).second) return;
    switch (f.kind()) {
        case Conn::And:
        case Conn::Or:
            collect_subformulas(f.lhs(), out);
            collect_subformulas(f.rhs(), out);
            return;
        case Conn::Box:
        case Conn::Dia:
            collect_subformulas(f.child(), out);
            return;
        default:
            return;
    }
}

size_t subformula_count(const Formula& f) {
    std::set<Formula> out;
    collect_subformulas(f, out);
    return out.size();
}

// ---------------------------------------------------------------------------
// Parsing
//
// We first read a raw surface tree (which still has ~ and ->) and then lower
// it into NNF by pushing polarity down, so the core type never sees either.

namespace {

struct ParseErrorBuilder {
    size_t offset;
    std::vector<std::string> expected;
};

struct Raw {
    enum class K { Top, Bot, Atom, Neg, And, Or, Imp, Box, Dia } k;
    std::string atom;
    std::unique_ptr<Raw> a, b;
};

using RawPtr = std::unique_ptr<Raw>;

RawPtr raw(Raw::K k) {
    auto r = std::make_unique<Raw>();
    r->k = k;
    return r;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    RawPtr parse() {
        auto f = imp();
        skip_ws();
        if (pos_ != text_.size()) fail({"'&'", "'|'", "'->'", "end of input"});
        return f;
    }

  private:
    std::string_view text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(std::vector<std::string> expected) {
        throw ParseError("syntax error", pos_, std::move(expected));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
    }

    bool eat(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    bool peek_atom_start() {
        skip_ws();
        return pos_ < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_]));
    }

    RawPtr imp() {
        auto l = disj();
        if (eat("->")) {
            auto r = imp();  // right associative
            auto n = raw(Raw::K::Imp);
            n->a = std::move(l);
            n->b = std::move(r);
            return n;
        }
        return l;
    }

    RawPtr disj() {
        auto l = conj();
        while (true) {
            skip_ws();
            // Do not confuse '|' with nothing else; '->' starts with '-'.
            if (pos_ < text_.size() && text_[pos_] == '|') {
                pos_++;
                auto r = conj();
                auto n = raw(Raw::K::Or);
                n->a = std::move(l);
                n->b = std::move(r);
                l = std::move(n);
            } else {
                return l;
            }
        }
    }

    RawPtr conj() {
        auto l = unary();
        while (eat("&")) {
            auto r = unary();
            auto n = raw(Raw::K::And);
            n->a = std::move(l);
            n->b = std::move(r);
            l = std::move(n);
        }
        return l;
    }

    RawPtr unary() {
        if (eat("~")) {
            auto n = raw(Raw::K::Neg);
            n->a = unary();
            return n;
        }
        if (eat("[]")) {
            auto n = raw(Raw::K::Box);
            n->a = unary();
            return n;
        }
        if (eat("<>")) {
            auto n = raw(Raw::K::Dia);
            n->a = unary();
            return n;
        }
        return primary();
    }

    RawPtr primary() {
        skip_ws();
        if (eat("(")) {
            auto f = imp();
            if (!eat(")")) fail({"')'"});
            return f;
        }
        if (pos_ < text_.size() && text_[pos_] == 'T') {
            pos_++;
            return raw(Raw::K::Top);
        }
        if (pos_ < text_.size() && text_[pos_] == 'F') {
            pos_++;
            return raw(Raw::K::Bot);
        }
        if (peek_atom_start()) {
            size_t start = pos_;
            pos_++;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                pos_++;
            auto n = raw(Raw::K::Atom);
            n->atom = std::string(text_.substr(start, pos_ - start));
            return n;
        }
        fail({"'T'", "'F'", "atom", "'~'", "'[]'", "'<>'", "'('"});
    }
};

Formula lower(const Raw& r, bool positive) {
    switch (r.k) {
        case Raw::K::Top:
            return positive ? Formula::top() : Formula::bottom();
        case Raw::K::Bot:
            return positive ? Formula::bottom() : Formula::top();
        case Raw::K::Atom:
            return Formula::lit(Literal(r.atom, !positive));
        case Raw::K::Neg:
            return lower(*r.a, !positive);
        case Raw::K::And:
            return positive ? Formula::conj(lower(*r.a, true), lower(*r.b, true))
                            : Formula::disj(lower(*r.a, false), lower(*r.b, false));
        case Raw::K::Or:
            return positive ? Formula::disj(lower(*r.a, true), lower(*r.b, true))
                            : Formula::conj(lower(*r.a, false), lower(*r.b, false));
        case Raw::K::Imp:
            // a -> b  :=  ~a | b
            return positive ? Formula::disj(lower(*r.a, false), lower(*r.b, true))
                            : Formula::conj(lower(*r.a, true), lower(*r.b, false));
        case Raw::K::Box:
            return positive ? Formula::box(lower(*r.a, true)) : Formula::dia(lower(*r.a, false));
        case Raw::K::Dia:
            return positive ? Formula::dia(lower(*r.a, true)) : Formula::box(lower(*r.a, false));
    }
    return Formula::top();
}

}  // namespace

ParseError::ParseError(std::string msg, size_t off, std::vector<std::string> exp)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << msg << " at offset " << off << "; expected ";
          for (size_t i = 0; i < exp.size(); ++i) os << (i ? ", " : "") << exp[i];
          return os.str();
      }()),
      offset(off),
      expected(std::move(exp)) {}

Formula parse_formula(std::string_view text) {
    Parser p(text);
    auto rawTree = p.parse();
    return lower(*rawTree, true);
}

// ---------------------------------------------------------------------------
// Printing with minimal parentheses. Precedence: | < & < unary < atoms.

namespace {

int prec(const Formula& f) {
    switch (f.kind()) {
        case Conn::Or:
            return 1;
        case Conn::And:
            return 2;
        case Conn::Box:
        case Conn::Dia:
            return 3;
        default:
            return 4;
    }
}

void print_rec(const Formula& f, std::string& out, int min_prec) {
    bool parens = prec(f) < min_prec;
    if (parens) out += '(';
    switch (f.kind()) {
        case Conn::Top:
            out += 'T';
            break;
        case Conn::Bottom:
            out += 'F';
            break;
        case Conn::Lit:
            if (f.literal().negated) out += '~';
            out += f.literal().atom;
            break;
        case Conn::And:
            // left associative: right operand of the same precedence is
            // parenthesized so the tree shape survives a round trip
            print_rec(f.lhs(), out, 2);
            out += " & ";
            print_rec(f.rhs(), out, 3);
            break;
        case Conn::Or:
            print_rec(f.lhs(), out, 1);
            out += " | ";
            print_rec(f.rhs(), out, 2);
            break;
        case Conn::Box:
            out += "[]";
            print_rec(f.child(), out, 3);
            break;
        case Conn::Dia:
            out += "<>";
            print_rec(f.child(), out, 3);
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string print_formula(const Formula& f) {
    std::string out;
    print_rec(f, out, 0);
    return out;
}

std::string Formula::str() const { return print_formula(*this); }

}  // namespace k5kit
