#pragma once

#include "csplab/treewidth.hpp"

namespace csplab {

/// Node of a tree-shaped formula built from existential quantifier blocks,
/// finite conjunctions, and atoms. Variables are indices into a fixed pool
/// x1..xk; reuse with shadowing keeps the distinct-name count within k.
struct LkNode {
    enum class Kind { True, Atom, And, Exists };
    Kind kind = Kind::True;
    int symbol = -1;          // Atom: signature symbol index
    std::vector<int> vars;    // Atom: pool ids per argument
    std::vector<int> bound;   // Exists: pool ids bound here
    std::vector<LkNode> children;  // And: conjuncts; Exists: one child
};

/// A sentence with its variable budget k and conjunct free-variable budget l.
struct LkFormula {
    int l = 0;
    int k = 0;
    Signature sig;
    LkNode root;
};

/// Translates the canonical conjunctive query of s along a width-(l,k)
/// decomposition: per bag the atoms inside it, per child subtree an
/// existentially quantified subformula with at most l free variables.
LkFormula canonical_query_lk(const Structure& s, const TreeDecomposition& d);

/// Standard recursive evaluation with assignment environments.
bool evaluate_formula(const LkFormula& f, const Structure& b);

/// Syntactic check of the budgets: at most k distinct pool ids, and every
/// conjunct of every conjunction is quantifier-free or has at most l free
/// variables.
bool lk_formula_valid(const LkFormula& f);

std::string to_text(const LkFormula& f);

}  // namespace csplab
