#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csplab {

/// Error raised while reading one of the text file formats. Carries the
/// 1-based line number when known (0 otherwise).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : std::move(message)),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

/// Raised when a configured search/enumeration budget or cap is exceeded.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A relational signature: an ordered list of (name, arity) pairs.
/// Names are unique; arity 0 is permitted (used for `false`).
struct Signature {
    std::vector<std::pair<std::string, int>> symbols;

    int index_of(std::string_view name) const;
    bool has(std::string_view name) const { return index_of(name) >= 0; }
    int arity(int sym) const { return symbols[static_cast<size_t>(sym)].second; }
    const std::string& name(int sym) const { return symbols[static_cast<size_t>(sym)].first; }
    size_t size() const { return symbols.size(); }
    int max_arity() const;

    /// Appends a symbol; throws std::invalid_argument on duplicate name or
    /// negative arity.
    int add(std::string name, int arity);

    bool operator==(const Signature&) const = default;
};

/// A tuple of domain element indices.
using Tuple = std::vector<int>;

/// A finite relational structure. Elements are opaque strings; the element
/// order is declaration order and drives every deterministic enumeration.
/// Relations are index-aligned with the signature's symbols.
struct Structure {
    Signature sig;
    std::vector<std::string> domain;
    std::vector<std::set<Tuple>> relations;

    Structure() = default;
    explicit Structure(Signature s) : sig(std::move(s)), relations(sig.size()) {}

    size_t size() const { return domain.size(); }

    int element_index(std::string_view name) const;
    /// Returns the index of `name`, adding it to the domain if absent.
    int ensure_element(std::string_view name);

    /// Adds a fact; throws std::invalid_argument on arity mismatch or an
    /// out-of-range element.
    void add_fact(int sym, Tuple tuple);
    void add_fact(std::string_view sym, const std::vector<std::string>& elems);
    bool has_fact(int sym, const Tuple& tuple) const;

    size_t fact_count() const;

    bool operator==(const Structure&) const = default;
};

/// Parses the line-based structure file format:
///   # comment
///   rel NAME ARITY
///   domain e1 e2 ...
///   NAME e1 ... eARITY
/// Unseen-in-facts elements may be introduced with `domain` lines.
Structure parse_structure(std::istream& in);
Structure parse_structure(const std::string& text);
Structure load_structure(const std::string& path);

/// Renders a structure back into the file format (round-trips through
/// parse_structure).
std::string to_text(const Structure& s);

/// Disjoint union of two structures over the same signature. Elements of the
/// right operand are renamed when they collide with the left.
Structure disjoint_union(const Structure& a, const Structure& b);

/// The Gaifman graph: one binary symmetric relation `adj` with an edge
/// between two distinct elements iff they occur together in some fact.
/// No loops.
Structure gaifman_graph(const Structure& s);

/// Adjacency sets of the Gaifman graph, without building a Structure.
std::vector<std::set<int>> gaifman_adjacency(const Structure& s);

/// True iff the Gaifman graph of s is connected (an empty or singleton
/// structure counts as connected).
bool gaifman_connected(const Structure& s);

}  // namespace csplab
