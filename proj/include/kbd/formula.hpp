#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kbd {

enum class NodeKind { Atom, Not, And, Or, Implies, Iff, Top, Bottom };

class Formula {
public:
    Formula();  // top

    static Formula atom(std::string name);
    static Formula top();
    static Formula bottom();
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> parts);
    static Formula disjunction(std::vector<Formula> parts);
    static Formula implication(Formula lhs, Formula rhs);
    static Formula equivalence(Formula lhs, Formula rhs);

    NodeKind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const std::vector<Formula>& children() const { return node_->children; }

    // Canonical fully parenthesised prefix key; equal iff structurally equal.
    const std::string& key() const { return node_->key; }

    std::string str() const;

    void collect_atoms(std::vector<std::string>& out) const;

    friend bool operator==(const Formula& a, const Formula& b) { return a.key() == b.key(); }
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
    friend bool operator<(const Formula& a, const Formula& b) { return a.key() < b.key(); }

private:
    struct Node {
        NodeKind kind;
        std::string name;
        std::vector<Formula> children;
        std::string key;
    };
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula make(NodeKind k, std::string name, std::vector<Formula> ch);

    std::shared_ptr<const Node> node_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

Formula parse_formula(std::string_view text);

// Insertion-ordered set of formulas under structural equality.
class FormulaSet {
public:
    FormulaSet() = default;
    FormulaSet(std::initializer_list<Formula> fs);
    explicit FormulaSet(const std::vector<Formula>& fs);

    bool insert(const Formula& f);
    void insert_all(const FormulaSet& other);
    bool contains(const Formula& f) const;
    bool erase(const Formula& f);

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const Formula& operator[](std::size_t i) const { return items_[i]; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<Formula>& items() const { return items_; }

    // Index of f or -1.
    int index_of(const Formula& f) const;

    std::vector<std::string> atoms() const;

    FormulaSet minus(const FormulaSet& other) const;
    FormulaSet united(const FormulaSet& other) const;

    friend bool operator==(const FormulaSet& a, const FormulaSet& b);

private:
    std::vector<Formula> items_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace kbd
