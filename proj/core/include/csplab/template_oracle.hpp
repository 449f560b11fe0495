#pragma once

#include <array>
#include <optional>
#include <span>

#include "csplab/homomorphism.hpp"
#include "csplab/structure.hpp"

namespace csplab {

enum class TemplateKind { Finite, QOrder, Henson };

inline constexpr int kDefaultClassCap = 4;

/// A CSP template: a finite explicit structure, the dense linear order
/// (rationals with <), or the universal triangle-free graph. The two
/// infinite templates are presented through their orbit types only.
struct TemplateHandle {
    TemplateKind kind;
    Signature sig;
    Structure finite;  // populated for Finite only

    static TemplateHandle finite_template(Structure s);
    static TemplateHandle qorder();
    static TemplateHandle henson();

    bool is_finite() const { return kind == TemplateKind::Finite; }
    /// Short description used in reports ("finite(n=3)", "qorder", "henson").
    std::string describe() const;
};

/// `finite:<path>`, `qorder`, or `henson`.
TemplateHandle parse_template_selector(const std::string& selector);

/// One orbit of m-tuples of template values, in canonical form so that
/// structural equality is class equality.
///   Finite : payload is a concrete m-tuple of element indices.
///   QOrder : payload[i] is the rank of position i in a weak linear order;
///            ranks used form an initial segment 0..B-1.
///   Henson : payload[i] is the block id of position i (blocks numbered by
///            least position); `edges` lists adjacent block pairs (i<j),
///            sorted, loop-free and triangle-free.
struct AssignmentClass {
    TemplateKind kind = TemplateKind::Finite;
    int arity = 0;
    std::vector<int> payload;
    std::vector<std::pair<int, int>> edges;  // Henson only

    auto operator<=>(const AssignmentClass&) const = default;
};

std::string to_text(const AssignmentClass& c, const TemplateHandle& t);

/// Complete, duplicate-free, deterministic enumeration of the classes of
/// m-tuples. Throws BudgetError when m exceeds `cap`.
std::vector<AssignmentClass> classes(const TemplateHandle& t, int m,
                                     int cap = kDefaultClassCap);

/// The class of the sub-tuple picked out by `positions` (duplicates allowed).
AssignmentClass restrict_class(const AssignmentClass& c, std::span<const int> positions);

/// Does the atomic relation hold on the class? The class arity must equal
/// the symbol's arity.
bool class_holds(const TemplateHandle& t, int sym, const AssignmentClass& c);
bool class_holds(const TemplateHandle& t, std::string_view sym, const AssignmentClass& c);

/// Ground-truth CSP decision.
///   Finite : exhaustive homomorphism search (witness: the map).
///   QOrder : the digraph of <-facts is acyclic; a self-loop counts as a
///            cycle (witness on success: a topological order of the
///            variables).
///   Henson : the symmetrised E-graph is loop-free and triangle-free
///            (witness on refusal: the loop {v,v,v} or triangle {a,b,c}).
struct OracleDecision {
    bool satisfiable = false;
    std::optional<HomMap> hom;                  // Finite, satisfiable
    std::optional<std::vector<int>> topo_order; // QOrder, satisfiable
    std::optional<std::array<int, 3>> bad_triple;  // Henson, unsatisfiable
};

OracleDecision decide_csp(const TemplateHandle& t, const Structure& instance);

/// Finite kind only: the class carrying the concrete tuple.
AssignmentClass class_of_assignment(const TemplateHandle& t, const Tuple& tuple);

}  // namespace csplab
