#pragma once

#include <map>

#include "csplab/template_oracle.hpp"

namespace csplab {

/// Indexed view of a template's assignment classes up to a fixed arity cap,
/// with memoised restriction tables. The consistency and pebble engines work
/// on class indices through this layer.
///
/// Lazy memoisation makes a ClassSystem single-threaded; concurrent runs
/// should each build their own (the convenience overloads do).
class ClassSystem {
public:
    ClassSystem(TemplateHandle t, int cap);

    const TemplateHandle& tmpl() const { return tmpl_; }
    int cap() const { return cap_; }

    int count(int m) const { return static_cast<int>(by_arity_[static_cast<size_t>(m)].size()); }
    const AssignmentClass& at(int m, int idx) const {
        return by_arity_[static_cast<size_t>(m)][static_cast<size_t>(idx)];
    }
    /// Index of a canonical-form class within its arity; -1 if not found.
    int index_of(const AssignmentClass& c) const;

    /// Table mapping each class index of arity m to the index of its
    /// restriction along `positions` (length = target arity).
    const std::vector<int>& restriction_table(int m, const std::vector<int>& positions) const;

    int restrict_index(int m, const std::vector<int>& positions, int idx) const {
        return restriction_table(m, positions)[static_cast<size_t>(idx)];
    }

    /// Does `sym` hold on the restriction of class idx (arity m) to positions?
    bool fact_holds(int sym, int m, const std::vector<int>& positions, int idx) const;

    /// Classes of arity m whose restriction along `positions` has index
    /// `idx` (positions has length m-1 and is strictly increasing: the old
    /// coordinates inside the extended tuple).
    const std::vector<int>& extensions(int m, const std::vector<int>& positions, int idx) const;

private:
    TemplateHandle tmpl_;
    int cap_;
    std::vector<std::vector<AssignmentClass>> by_arity_;  // sorted per arity

    mutable std::map<std::pair<int, std::vector<int>>, std::vector<int>> restrict_memo_;
    mutable std::map<std::tuple<int, int, std::vector<int>>, std::vector<char>> holds_memo_;
    mutable std::map<std::pair<int, std::vector<int>>, std::vector<std::vector<int>>> ext_memo_;
};

}  // namespace csplab
