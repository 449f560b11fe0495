#pragma once

#include <random>
#include <string>
#include <vector>

#include "csplab/structure.hpp"

namespace csplab::testutil {

/// A structure with one binary symbol `name` on n elements e0..e{n-1}.
inline Structure binary_structure(int n, const std::string& name = "edge") {
    Structure s;
    s.sig.add(name, 2);
    s.relations.emplace_back();
    for (int i = 0; i < n; ++i) s.ensure_element("e" + std::to_string(i));
    return s;
}

inline Structure with_edges(int n, const std::vector<std::pair<int, int>>& directed,
                            const std::string& name = "edge") {
    Structure s = binary_structure(n, name);
    for (auto [a, b] : directed) s.add_fact(0, {a, b});
    return s;
}

/// Undirected graph: both orientations of every listed edge.
inline Structure undirected(int n, const std::vector<std::pair<int, int>>& edges,
                            const std::string& name = "edge") {
    Structure s = binary_structure(n, name);
    for (auto [a, b] : edges) {
        s.add_fact(0, {a, b});
        s.add_fact(0, {b, a});
    }
    return s;
}

inline Structure complete_graph(int n, const std::string& name = "edge") {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return undirected(n, e, name);
}

inline Structure directed_cycle(int n, const std::string& name = "edge") {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return with_edges(n, e, name);
}

inline Structure directed_path(int n, const std::string& name = "edge") {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return with_edges(n, e, name);
}

inline Structure undirected_cycle(int n, const std::string& name = "edge") {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return undirected(n, e, name);
}

/// Enumerates every fact set over one binary symbol on n elements by bitmask
/// (ordered pairs including loops unless loop_free).
inline Structure binary_from_mask(int n, uint64_t mask, bool loop_free,
                                  const std::string& name = "edge") {
    Structure s = binary_structure(n, name);
    int bit = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (loop_free && a == b) continue;
            if (mask & (uint64_t{1} << bit)) s.add_fact(0, {a, b});
            ++bit;
        }
    return s;
}

inline int binary_mask_bits(int n, bool loop_free) { return loop_free ? n * (n - 1) : n * n; }

/// Symmetric (undirected) fact set from a bitmask over unordered pairs and,
/// when with_loops is set, a trailing block of loop bits.
inline Structure symmetric_from_mask(int n, uint64_t mask, bool with_loops,
                                     const std::string& name = "edge") {
    Structure s = binary_structure(n, name);
    int bit = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (mask & (uint64_t{1} << bit)) {
                s.add_fact(0, {a, b});
                s.add_fact(0, {b, a});
            }
            ++bit;
        }
    if (with_loops)
        for (int a = 0; a < n; ++a) {
            if (mask & (uint64_t{1} << bit)) s.add_fact(0, {a, a});
            ++bit;
        }
    return s;
}

inline int symmetric_mask_bits(int n, bool with_loops) {
    return n * (n - 1) / 2 + (with_loops ? n : 0);
}

inline Structure random_binary(std::mt19937& rng, int max_n, double density = 0.4,
                               bool loop_free = true, const std::string& name = "edge") {
    std::uniform_int_distribution<int> nd(1, max_n);
    int n = nd(rng);
    std::bernoulli_distribution coin(density);
    Structure s = binary_structure(n, name);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (loop_free && a == b) continue;
            if (coin(rng)) s.add_fact(0, {a, b});
        }
    return s;
}

}  // namespace csplab::testutil
