#pragma once

#include <iosfwd>

#include "csplab/homomorphism.hpp"
#include "csplab/structure.hpp"

namespace csplab {

/// One literal of a clause body: an input atom (always positive) or a
/// monadic atom (possibly negated).
struct MmsnpLiteral {
    bool monadic = false;
    bool negated = false;  // monadic literals only
    int symbol = 0;        // input signature index, or monadic index
    std::vector<int> vars; // clause-variable indices
};

/// A denied conjunction: the sentence requires that no assignment of the
/// clause variables matches all literals.
struct MmsnpClause {
    std::vector<std::string> var_names;
    std::vector<MmsnpLiteral> literals;
};

/// A monotone monadic SNP sentence without inequality, in negation normal
/// form: existential monadic predicates, universal first-order part made of
/// negated conjunctions in which every input atom occurs positively.
struct MmsnpSentence {
    Signature input_sig;
    std::vector<std::string> monadic;
    std::vector<MmsnpClause> clauses;
};

/// Parses the sentence file format:
///   input E 2
///   monadic P
///   deny E(x,y), P(x), !P(y)
/// Violations are rejected with the violated rule named: non-monadic
/// existential usage, negated input atom (inputs must occur positively in
/// bodies), inequality atoms.
MmsnpSentence parse_mmsnp(std::istream& in);
MmsnpSentence parse_mmsnp(const std::string& text);
MmsnpSentence load_mmsnp(const std::string& path);

/// True iff some assignment of the monadic predicates leaves every clause
/// body unmatched in s. Enumerates monadic expansions as bit vectors in
/// ascending order with early clause pruning; throws BudgetError when
/// 2^(|domain| * |monadic|) exceeds the budget.
bool model_check(const MmsnpSentence& phi, const Structure& s,
                 size_t budget = size_t{1} << 24);

/// One structure per clause over the expanded signature (inputs, monadic
/// predicates, and primed copies standing for negated monadic literals):
/// the canonical database of the clause body.
std::vector<Structure> obstruction_structures(const MmsnpSentence& phi);

/// Gaifman connectivity of each obstruction structure.
std::vector<bool> connectivity_report(const std::vector<Structure>& obstructions);

/// True iff no obstruction maps homomorphically into the instance.
bool decide_by_obstructions(const std::vector<Structure>& obstructions,
                            const Structure& instance);

struct UnionClosureReport {
    long pairs_checked = 0;
    // First violating pair, if any: both satisfy the sentence but the
    // disjoint union does not.
    std::optional<std::pair<Structure, Structure>> violation;
};

/// Samples pairs from `samples` and flags any that break closure under
/// disjoint union.
UnionClosureReport disjoint_union_closure_probe(const MmsnpSentence& phi,
                                                const std::vector<Structure>& samples,
                                                size_t budget = size_t{1} << 24);

}  // namespace csplab
