#include "kbd/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace kbd {

namespace {

const char* kind_tag(NodeKind k) {
    switch (k) {
        case NodeKind::Atom: return "a";
        case NodeKind::Not: return "not";
        case NodeKind::And: return "and";
        case NodeKind::Or: return "or";
        case NodeKind::Implies: return "imp";
        case NodeKind::Iff: return "iff";
        case NodeKind::Top: return "T";
        case NodeKind::Bottom: return "F";
    }
    return "?";
}

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Iff: return 1;
        case NodeKind::Implies: return 2;
        case NodeKind::Or: return 3;
        case NodeKind::And: return 4;
        case NodeKind::Not: return 5;
        default: return 6;
    }
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Formula parse() {
        Formula f = parse_iff();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected input");
        return f;
    }

private:
    enum class Tok { End, LParen, RParen, Not, And, Or, Implies, Iff, Ident, Other };

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool match(std::string_view lit) {
        if (s_.substr(pos_, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    Tok peek(std::size_t* len = nullptr) {
        skip_ws();
        std::size_t n = 0;
        Tok t = Tok::Other;
        auto at = [&](std::string_view lit) { return s_.substr(pos_, lit.size()) == lit; };
        if (pos_ >= s_.size()) { t = Tok::End; }
        else if (at("(")) { t = Tok::LParen; n = 1; }
        else if (at(")")) { t = Tok::RParen; n = 1; }
        else if (at("<->")) { t = Tok::Iff; n = 3; }
        else if (at("\xE2\x86\x94")) { t = Tok::Iff; n = 3; }
        else if (at("->")) { t = Tok::Implies; n = 2; }
        else if (at("\xE2\x86\x92")) { t = Tok::Implies; n = 3; }
        else if (at("!") || at("~")) { t = Tok::Not; n = 1; }
        else if (at("\xC2\xAC")) { t = Tok::Not; n = 2; }
        else if (at("&")) { t = Tok::And; n = 1; }
        else if (at("\xE2\x88\xA7")) { t = Tok::And; n = 3; }
        else if (at("|")) { t = Tok::Or; n = 1; }
        else if (at("\xE2\x88\xA8")) { t = Tok::Or; n = 3; }
        else if (is_ident_char(s_[pos_])) { t = Tok::Ident; }
        if (len) *len = n;
        return t;
    }

    void consume(std::size_t n) { pos_ += n; }

    Formula parse_iff() {
        Formula lhs = parse_implies();
        std::size_t n;
        if (peek(&n) == Tok::Iff) {
            consume(n);
            Formula rhs = parse_iff();
            return Formula::equivalence(lhs, rhs);
        }
        return lhs;
    }

    Formula parse_implies() {
        Formula lhs = parse_or();
        std::size_t n;
        if (peek(&n) == Tok::Implies) {
            consume(n);
            Formula rhs = parse_implies();
            return Formula::implication(lhs, rhs);
        }
        return lhs;
    }

    Formula parse_or() {
        std::vector<Formula> parts{parse_and()};
        std::size_t n;
        while (peek(&n) == Tok::Or) {
            consume(n);
            parts.push_back(parse_and());
        }
        return parts.size() == 1 ? parts[0] : Formula::disjunction(std::move(parts));
    }

    Formula parse_and() {
        std::vector<Formula> parts{parse_unary()};
        std::size_t n;
        while (peek(&n) == Tok::And) {
            consume(n);
            parts.push_back(parse_unary());
        }
        return parts.size() == 1 ? parts[0] : Formula::conjunction(std::move(parts));
    }

    Formula parse_unary() {
        std::size_t n;
        switch (peek(&n)) {
            case Tok::Not:
                consume(n);
                return Formula::negation(parse_unary());
            case Tok::LParen: {
                consume(n);
                Formula f = parse_iff();
                if (peek(&n) != Tok::RParen) fail("expected ')'");
                consume(n);
                return f;
            }
            case Tok::Ident: {
                std::size_t start = pos_;
                while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
                std::string name(s_.substr(start, pos_ - start));
                if (name == "true") return Formula::top();
                if (name == "false") return Formula::bottom();
                return Formula::atom(std::move(name));
            }
            case Tok::End:
                fail("unexpected end of input");
            default:
                break;
        }
        if (match("\xE2\x8A\xA4")) return Formula::top();
        if (match("\xE2\x8A\xA5")) return Formula::bottom();
        fail("unexpected token");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string render(const Formula& f, int parent_prec, bool needs_strict) {
    std::string out;
    int p = precedence(f.kind());
    switch (f.kind()) {
        case NodeKind::Atom: return f.name();
        case NodeKind::Top: return "true";
        case NodeKind::Bottom: return "false";
        case NodeKind::Not:
            out = "!" + render(f.children()[0], p, false);
            break;
        case NodeKind::And:
        case NodeKind::Or: {
            const char* op = f.kind() == NodeKind::And ? " & " : " | ";
            for (std::size_t i = 0; i < f.children().size(); ++i) {
                if (i) out += op;
                out += render(f.children()[i], p, true);
            }
            break;
        }
        case NodeKind::Implies:
        case NodeKind::Iff: {
            const char* op = f.kind() == NodeKind::Implies ? " -> " : " <-> ";
            out = render(f.children()[0], p, true) + op + render(f.children()[1], p, false);
            break;
        }
    }
    if (p < parent_prec || (needs_strict && p == parent_prec)) return "(" + out + ")";
    return out;
}

}  // namespace

Formula::Formula() : Formula(top()) {}

Formula Formula::make(NodeKind k, std::string name, std::vector<Formula> ch) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->children = std::move(ch);
    if (k == NodeKind::Atom) {
        n->key = n->name;
    } else {
        std::string key = "(";
        key += kind_tag(k);
        for (const auto& c : n->children) key += " " + c.key();
        key += ")";
        n->key = std::move(key);
    }
    return Formula(std::move(n));
}

Formula Formula::atom(std::string name) {
    if (name.empty() || !std::all_of(name.begin(), name.end(), is_ident_char))
        throw std::invalid_argument("invalid atom name '" + name + "'");
    if (name == "true" || name == "false")
        throw std::invalid_argument("reserved atom name '" + name + "'");
    return make(NodeKind::Atom, std::move(name), {});
}

Formula Formula::top() { return make(NodeKind::Top, "", {}); }
Formula Formula::bottom() { return make(NodeKind::Bottom, "", {}); }
Formula Formula::negation(Formula f) { return make(NodeKind::Not, "", {std::move(f)}); }

Formula Formula::conjunction(std::vector<Formula> parts) {
    if (parts.size() < 2) throw std::invalid_argument("conjunction needs at least two operands");
    return make(NodeKind::And, "", std::move(parts));
}

Formula Formula::disjunction(std::vector<Formula> parts) {
    if (parts.size() < 2) throw std::invalid_argument("disjunction needs at least two operands");
    return make(NodeKind::Or, "", std::move(parts));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
    return make(NodeKind::Implies, "", {std::move(lhs), std::move(rhs)});
}

Formula Formula::equivalence(Formula lhs, Formula rhs) {
    return make(NodeKind::Iff, "", {std::move(lhs), std::move(rhs)});
}

std::string Formula::str() const { return render(*this, 0, false); }

void Formula::collect_atoms(std::vector<std::string>& out) const {
    if (kind() == NodeKind::Atom) {
        if (std::find(out.begin(), out.end(), name()) == out.end()) out.push_back(name());
        return;
    }
    for (const auto& c : children()) c.collect_atoms(out);
}

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

FormulaSet::FormulaSet(std::initializer_list<Formula> fs) {
    for (const auto& f : fs) insert(f);
}

FormulaSet::FormulaSet(const std::vector<Formula>& fs) {
    for (const auto& f : fs) insert(f);
}

bool FormulaSet::insert(const Formula& f) {
    auto [it, added] = index_.emplace(f.key(), items_.size());
    if (added) items_.push_back(f);
    return added;
}

void FormulaSet::insert_all(const FormulaSet& other) {
    for (const auto& f : other) insert(f);
}

bool FormulaSet::contains(const Formula& f) const { return index_.count(f.key()) > 0; }

bool FormulaSet::erase(const Formula& f) {
    auto it = index_.find(f.key());
    if (it == index_.end()) return false;
    items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(it->second));
    index_.clear();
    for (std::size_t i = 0; i < items_.size(); ++i) index_.emplace(items_[i].key(), i);
    return true;
}

int FormulaSet::index_of(const Formula& f) const {
    auto it = index_.find(f.key());
    return it == index_.end() ? -1 : static_cast<int>(it->second);
}

std::vector<std::string> FormulaSet::atoms() const {
    std::vector<std::string> out;
    for (const auto& f : items_) f.collect_atoms(out);
    return out;
}

FormulaSet FormulaSet::minus(const FormulaSet& other) const {
    FormulaSet r;
    for (const auto& f : items_)
        if (!other.contains(f)) r.insert(f);
    return r;
}

FormulaSet FormulaSet::united(const FormulaSet& other) const {
    FormulaSet r = *this;
    r.insert_all(other);
    return r;
}

bool operator==(const FormulaSet& a, const FormulaSet& b) {
    if (a.size() != b.size()) return false;
    for (const auto& f : a)
        if (!b.contains(f)) return false;
    return true;
}

}  // namespace kbd
