#pragma once

#include "csplab/structure.hpp"

namespace csplab {

/// A conjunctive query with named variables, some of which may be free.
struct TaggedQuery {
    std::vector<std::string> variables;
    std::vector<std::pair<std::string, std::vector<std::string>>> atoms;
    std::vector<std::string> free;
};

/// The canonical conjunctive query of a structure: one existential variable
/// per element, one atom per fact, no free variables. Satisfaction on a
/// target coincides with homomorphism existence.
TaggedQuery canonical_query(const Structure& s);

/// Direct satisfaction test by backtracking over the query's variables.
/// Free variables are bound by `free_values` (target element indices).
bool query_satisfied(const TaggedQuery& q, const Structure& target,
                     const std::vector<int>& free_values = {});

std::string to_text(const TaggedQuery& q);

}  // namespace csplab
