#pragma once

#include "csplab/class_system.hpp"
#include "csplab/datalog.hpp"

namespace csplab {

inline constexpr size_t kDefaultBudget = 20'000'000;

enum class ScheduleOrder { Fifo, Lifo };

struct ConsistencyOptions {
    int cap = kDefaultClassCap;
    ScheduleOrder order = ScheduleOrder::Fifo;
};

/// State of the (l,k)-consistency fixpoint: for every tuple of at most l
/// distinct instance variables (stored sorted by declaration order), the set
/// of assignment classes still admissible on it. `failed` iff some entry is
/// empty, which is exactly when the canonical (l,k)-Datalog program derives
/// false.
struct ConstraintStore {
    int l = 0;
    int k = 0;
    std::vector<std::vector<int>> keys;      // sorted variable tuples, sizes 1..l
    std::vector<std::vector<char>> entries;  // per key: admissible-class mask
    bool failed = false;
    long iterations = 0;  // worklist pairs processed

    int key_index(const std::vector<int>& vars) const;
    size_t entry_size(int key) const;
};

/// Materialises one entry as explicit classes.
std::vector<AssignmentClass> store_classes(const ConstraintStore& store, const ClassSystem& cs,
                                           int key);

/// Classes admissible on an arbitrary ordered variable tuple (repeats
/// allowed, at most l distinct variables), derived from the canonical entry
/// by permutation/duplication.
std::set<AssignmentClass> classes_for_tuple(const ConstraintStore& store, const ClassSystem& cs,
                                            const std::vector<int>& vars);

/// Runs the (l,k)-consistency fixpoint: the greatest store in which every
/// admissible class on a tuple s extends, for every superset W of at most k
/// variables, to a class on W that satisfies all instance facts inside W and
/// restricts into every entry on every sub-tuple of W. Fails eagerly when an
/// entry empties.
ConstraintStore establish_lk_consistency(const Structure& instance, const ClassSystem& cs,
                                         int l, int k,
                                         ScheduleOrder order = ScheduleOrder::Fifo);
ConstraintStore establish_lk_consistency(const Structure& instance, const TemplateHandle& t,
                                         int l, int k, const ConsistencyOptions& opts = {});

struct SolveReport {
    bool accepted = false;
    bool agrees_with_oracle = false;
};

SolveReport solves_on(const Structure& instance, const TemplateHandle& t, int l, int k,
                      const ConsistencyOptions& opts = {});

/// Emits a Datalog program equivalent to the consistency procedure for a
/// finite template: one IDB per reachable at-most-l-ary relation discovered
/// by closing k-variable inferences, one rule per inference schema.
/// Throws BudgetError when rule enumeration exceeds `budget` elementary
/// steps.
DatalogProgram materialize_canonical_program(const TemplateHandle& t, int l, int k,
                                             size_t budget = kDefaultBudget);

struct ArcResult {
    std::vector<std::vector<int>> domains;  // per variable, admissible template elements
    bool failed = false;
};

/// Hyper-arc consistency for a finite template: the greatest per-variable
/// domains in which every fact supports every remaining value.
ArcResult arc_consistency(const Structure& instance, const TemplateHandle& t);

inline constexpr int kDefaultPowerCap = 5;

/// The power structure used by the arc-consistency decidability test.
/// Finite kind: domain = nonempty subsets of the template domain; R holds on
/// (S_1..S_r) iff every value in every S_j has partners in the other subsets.
/// Oracle kinds: domain = unary classes; R holds iff some r-ary class with
/// the given unary restrictions satisfies R.
Structure power_structure(const TemplateHandle& t, int cap = kDefaultPowerCap);

/// Does arc consistency solve CSP(t)? Decided by the homomorphism test from
/// the power structure into the template (loop inspection for the two
/// irreflexive oracle templates).
bool ac_solves(const TemplateHandle& t, int cap = kDefaultPowerCap);

}  // namespace csplab
