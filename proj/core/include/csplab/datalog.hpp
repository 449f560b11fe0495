#pragma once

#include <iosfwd>
#include <map>

#include "csplab/structure.hpp"

namespace csplab {

struct Atom {
    std::string symbol;
    std::vector<std::string> args;

    bool operator==(const Atom&) const = default;
};

struct Rule {
    Atom head;
    std::vector<Atom> body;
};

/// A positive Datalog program. IDB and EDB symbol sets are disjoint; EDBs
/// never occur in heads; every head variable occurs in the rule body. The
/// 0-ary IDB `false` is always declared.
struct DatalogProgram {
    Signature edbs;
    Signature idbs;
    std::vector<Rule> rules;

    int false_index() const { return idbs.index_of("false"); }
};

/// One ground fact: (symbol name, element indices into the instance domain).
struct GroundFact {
    std::string symbol;
    Tuple args;

    auto operator<=>(const GroundFact&) const = default;
};

/// Deterministic record of how each derived fact was first obtained.
struct DerivationStep {
    GroundFact derived;
    int rule_index;
    std::vector<GroundFact> body_facts;
    std::map<std::string, int> assignment;  // rule variable -> instance element
};

struct DerivationTrace {
    std::vector<DerivationStep> steps;
};

struct EvalResult {
    Structure facts;  // over edbs followed by idbs
    DerivationTrace trace;
    bool derived_false = false;
};

/// Parses the program file format:
///   edb NAME ARITY
///   idb NAME ARITY
///   head(v1,v2) :- a1(x,y), a2(y,z).
/// `false` may be used in heads without declaration. Trailing dot optional.
DatalogProgram parse_program(std::istream& in);
DatalogProgram parse_program(const std::string& text);
DatalogProgram load_program(const std::string& path);

/// Validates the program invariants; throws std::invalid_argument naming the
/// violated rule. parse_program calls this.
void validate_program(const DatalogProgram& p);

/// (l, k): l = max distinct head variables over rules, k = max distinct
/// variables per rule. Empty program -> (0, 0).
std::pair<int, int> program_width(const DatalogProgram& p);

/// Semi-naive bottom-up least fixpoint. The instance must be over p.edbs.
/// Rules fire in file order with lexicographic assignments, so traces are
/// reproducible.
EvalResult evaluate(const DatalogProgram& p, const Structure& instance);

/// Round-based naive evaluation; same fixpoint, kept as a cross-check.
EvalResult evaluate_naive(const DatalogProgram& p, const Structure& instance);

bool derives_false(const DatalogProgram& p, const Structure& instance);

/// Re-runs the trace step by step. Returns true iff every step's body facts
/// are instance facts or earlier derived facts, each step re-derives its
/// fact via the named rule, and the final derived set equals `expected`.
bool replay_trace(const DerivationTrace& trace, const DatalogProgram& p,
                  const Structure& instance, const std::set<GroundFact>& expected);

/// Derived (IDB) facts of an evaluation result as a set of ground facts.
std::set<GroundFact> derived_facts(const DatalogProgram& p, const EvalResult& r);

std::string to_text(const DatalogProgram& p);

}  // namespace csplab
