#pragma once

#include <optional>

#include "csplab/datalog.hpp"
#include "csplab/structure.hpp"

namespace csplab {

/// A rooted tree of bags over a structure's elements. parent[i] < 0 marks
/// the root; bags are sorted element-index lists.
struct TreeDecomposition {
    int l = 0;
    int k = 0;
    std::vector<std::vector<int>> bags;
    std::vector<int> parent;
};

inline constexpr int kDefaultDecompositionCap = 10;

/// Exact search for a width-(l,k) tree decomposition of the Gaifman graph:
/// every bag has at most k elements and adjacent bags share at most l.
/// Returns nullopt only after exhausting the (memoised) search space.
/// Throws BudgetError when the structure exceeds `cap` elements.
std::optional<TreeDecomposition> find_decomposition(const Structure& s, int l, int k,
                                                    int cap = kDefaultDecompositionCap);

/// Re-checks every decomposition invariant independently: coverage of all
/// Gaifman edges, connectivity of each element's bags, bag size <= k,
/// adjacent intersections <= l, and that the parent array is a tree.
bool verify_decomposition(const TreeDecomposition& d, const Structure& s);

std::string to_text(const TreeDecomposition& d, const Structure& s);

/// Builds a structure from a derivation of `false`: one fresh fact gadget
/// per extensional body fact, glued along head-variable identifications.
/// The result maps homomorphically into the instance, has a width-(l,k)
/// decomposition for the program's width, and the program re-derives false
/// on it.
Structure obstruction_from_trace(const DerivationTrace& trace, const DatalogProgram& program,
                                 const Structure& instance);

}  // namespace csplab
