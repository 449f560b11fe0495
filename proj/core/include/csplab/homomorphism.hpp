#pragma once

#include <optional>

#include "csplab/structure.hpp"

namespace csplab {

/// A total map from a's domain to b's domain, indexed by a's element order.
using HomMap = std::vector<int>;

/// Checks that `map` preserves every fact of a in b. `map` may be partial
/// (-1 entries are ignored); facts with an unmapped entry are skipped.
bool is_partial_homomorphism(const Structure& a, const Structure& b, const HomMap& map);

/// True iff `map` is total and preserves every fact.
bool is_homomorphism(const Structure& a, const Structure& b, const HomMap& map);

/// Backtracking search over a's elements in declaration order, values in
/// declaration order, with forward checking against each fact. Returns the
/// lexicographically first homomorphism or nullopt after exhaustive search.
std::optional<HomMap> find_homomorphism(const Structure& a, const Structure& b);

/// All homomorphisms a -> b up to `limit`, in lexicographic order.
std::vector<HomMap> enumerate_homomorphisms(const Structure& a, const Structure& b,
                                            size_t limit = SIZE_MAX);

bool hom_equivalent(const Structure& a, const Structure& b);

/// The induced substructure on the given elements (indices into s.domain).
/// Facts with entries outside the subset are dropped; element order follows
/// the order of `elements`.
Structure induced_substructure(const Structure& s, const std::vector<int>& elements);

/// The core: an induced substructure hom-equivalent to s whose every
/// endomorphism is an automorphism. Retract subsets are searched by
/// increasing size, lexicographically within a size, so the result is the
/// minimum retract and deterministic.
Structure compute_core(const Structure& s);

}  // namespace csplab
