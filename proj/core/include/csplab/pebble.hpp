#pragma once

#include "csplab/class_system.hpp"

namespace csplab {

/// Duplicator's positional winning strategy: every pair (variable subset,
/// class) stands for all partial homomorphisms with that domain and orbit
/// type. Invariants: members satisfy the instance facts inside their domain,
/// the set is closed under restriction, members with at most l variables
/// extend by any at most k-|domain| further variables, and the empty member
/// is present.
struct StrategyFamily {
    int l = 0;
    int k = 0;
    std::vector<std::pair<std::vector<int>, AssignmentClass>> members;

    bool contains(const std::vector<int>& vars, const AssignmentClass& c) const;
};

/// Replayable certificate of a Spoiler win. Each move holds a position
/// Spoiler attacks (at most l variables plus the class Duplicator keeps
/// there), the enlarged variable set Spoiler pebbles, and one refutation per
/// Duplicator response class: either an instance fact the response violates,
/// or a follow-up move reached by restricting to that move's position.
struct SpoilerLine {
    struct Option {
        AssignmentClass response;          // class on the enlarged set
        int violated_sym = -1;             // >= 0: fact refutation
        std::vector<int> violated_fact;    // the fact's variable tuple
        int next_move = -1;                // >= 0: index of the follow-up move
    };
    struct Move {
        std::vector<int> domain_vars;  // sorted, size <= l
        AssignmentClass domain_class;
        std::vector<int> placed_vars;  // sorted superset of domain_vars, size <= k
        std::vector<Option> options;
    };
    std::vector<Move> moves;  // moves[0] is the root (empty position)
    int depth = 0;            // longest root-to-leaf chain, in moves
};

struct PebbleResult {
    bool wins = false;
    std::optional<StrategyFamily> strategy;
    std::optional<SpoilerLine> line;
};

/// Decides the existential (l,k)-pebble game on (instance, template) by the
/// greatest-fixpoint deletion procedure over (variable subset, class)
/// positions. Returns exactly one of strategy/line.
PebbleResult duplicator_wins(const Structure& instance, const ClassSystem& cs, int l, int k);
PebbleResult duplicator_wins(const Structure& instance, const TemplateHandle& t, int l, int k,
                             int cap = kDefaultClassCap);

/// Independently re-checks all StrategyFamily invariants by enumeration.
bool verify_strategy(const StrategyFamily& f, const Structure& instance, const ClassSystem& cs);
bool verify_strategy(const StrategyFamily& f, const Structure& instance,
                     const TemplateHandle& t);

/// True iff every Duplicator option at every move is refuted as claimed and
/// every response class is covered. Malformed lines raise ParseError.
bool replay_spoiler_line(const SpoilerLine& line, const Structure& instance,
                         const ClassSystem& cs, int l, int k);
bool replay_spoiler_line(const SpoilerLine& line, const Structure& instance,
                         const TemplateHandle& t, int l, int k);

}  // namespace csplab
