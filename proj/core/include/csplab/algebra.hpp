#pragma once

#include "csplab/consistency.hpp"

namespace csplab {

/// A finite operation f : D^m -> D stored as a flat table in lexicographic
/// argument order.
struct OperationTable {
    int arity = 0;
    int domain_size = 0;
    std::vector<int> table;  // size = domain_size^arity

    size_t index_of(const Tuple& args) const;
    int apply(const Tuple& args) const { return table[index_of(args)]; }
};

/// Componentwise power of a finite template: domain D^m, a relation holds on
/// a tuple of m-tuples iff it holds componentwise in every coordinate.
Structure power_structure_alg(const TemplateHandle& t, int m,
                              size_t budget = kDefaultBudget);

/// Searches for a homomorphism from the m-th power into the template whose
/// restriction satisfies the near-unanimity identities on `on_subset`
/// (template element indices). Near-unanimity entries are pre-assigned, the
/// rest is propagation-guided backtracking. Exhaustive within the budget.
std::optional<OperationTable> find_nu_polymorphism(const TemplateHandle& t, int m,
                                                   const std::vector<int>& on_subset,
                                                   size_t budget = kDefaultBudget);

/// Checks preservation of every relation over all argument tuples.
bool verify_polymorphism(const OperationTable& f, const TemplateHandle& t);

/// Checks f(x,..,x,y,x,..,x) = x for all x, y in the subset.
bool nu_identities_hold(const OperationTable& f, const std::vector<int>& on_subset);

/// CSV rows `x1,...,xm,f` in table order.
std::string to_csv(const OperationTable& f, const TemplateHandle& t);

/// One store-consistent partial assignment that admits no extension to a
/// full solution, together with the variable that cannot be filled.
struct GlobalConsistencyReport {
    bool globally_consistent = true;
    long assignments_checked = 0;
    // Counterexample (when not globally consistent):
    std::vector<int> witness_vars;            // sorted variable subset
    AssignmentClass witness_class;            // admissible class on the subset
};

/// After (l,k)-consistency succeeds, enumerates every store-consistent
/// partial assignment (classes on variable subsets that satisfy the facts
/// inside the subset and restrict into every entry) and tries to extend each
/// variable-by-variable to a full solution by exhaustive search. Evidence at
/// desk scale, not proof: instances beyond the caps are out of reach.
GlobalConsistencyReport global_consistency_probe(const Structure& instance,
                                                 const TemplateHandle& t, int l, int k,
                                                 int cap = -1);
GlobalConsistencyReport global_consistency_probe(const Structure& instance,
                                                 const ClassSystem& cs, int l, int k);

}  // namespace csplab
