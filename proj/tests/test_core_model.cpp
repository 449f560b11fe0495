#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "csplab/homomorphism.hpp"
#include "csplab/query.hpp"
#include "csplab/structure.hpp"
#include "test_util.hpp"

using namespace csplab;
using namespace csplab::testutil;

TEST_CASE("structure parsing") {
    Structure s = parse_structure("rel edge 2\nedge a b\nedge b c");
    CHECK(s.domain == std::vector<std::string>{"a", "b", "c"});
    CHECK(s.relations[0].size() == 2);
    CHECK(s.has_fact(0, {0, 1}));
    CHECK(s.has_fact(0, {1, 2}));

    Structure r = parse_structure("rel R 1\ndomain x\n");
    CHECK(r.domain == std::vector<std::string>{"x"});
    CHECK(r.relations[0].empty());

    CHECK_THROWS_AS(parse_structure("rel edge 2\nedge a"), ParseError);
    CHECK_THROWS_AS(parse_structure("edge a b"), ParseError);  // undeclared symbol
    CHECK_THROWS_AS(parse_structure("rel edge 2\nrel edge 2"), ParseError);

    // Comments and round-trip.
    Structure c = parse_structure("# heading\nrel edge 2 # trailing\nedge a b\n");
    CHECK(c.relations[0].size() == 1);
    CHECK(parse_structure(to_text(s)) == s);
}

TEST_CASE("disjoint union") {
    Structure e1 = with_edges(2, {{0, 1}});
    Structure e2 = with_edges(2, {{0, 1}});
    Structure u = disjoint_union(e1, e2);
    CHECK(u.domain.size() == 4);
    CHECK(u.relations[0].size() == 2);

    Structure empty = binary_structure(0);
    Structure u2 = disjoint_union(e1, empty);
    CHECK(u2 == e1);

    Structure other;
    other.sig.add("foo", 1);
    other.relations.emplace_back();
    CHECK_THROWS_AS(disjoint_union(e1, other), std::invalid_argument);
}

TEST_CASE("disjoint union splits homomorphism existence") {
    std::mt19937 rng(12345);
    Structure k3 = complete_graph(3);
    for (int trial = 0; trial < 60; ++trial) {
        Structure a = random_binary(rng, 4);
        Structure b = random_binary(rng, 4);
        Structure u = disjoint_union(a, b);
        bool split = find_homomorphism(a, k3).has_value() &&
                     find_homomorphism(b, k3).has_value();
        CHECK(find_homomorphism(u, k3).has_value() == split);
    }
}

TEST_CASE("gaifman graph") {
    Structure s;
    s.sig.add("R", 3);
    s.relations.emplace_back();
    s.ensure_element("a");
    s.ensure_element("b");
    s.ensure_element("c");
    s.add_fact(0, {0, 1, 2});
    Structure g = gaifman_graph(s);
    CHECK(g.relations[0].size() == 6);  // triangle, both directions

    Structure unary;
    unary.sig.add("P", 1);
    unary.relations.emplace_back();
    unary.ensure_element("a");
    unary.ensure_element("b");
    unary.add_fact(0, {0});
    unary.add_fact(0, {1});
    CHECK(gaifman_graph(unary).relations[0].empty());

    Structure rep;
    rep.sig.add("R", 3);
    rep.relations.emplace_back();
    rep.ensure_element("a");
    rep.ensure_element("b");
    rep.add_fact(0, {0, 0, 1});
    Structure gr = gaifman_graph(rep);
    CHECK(gr.relations[0] == std::set<Tuple>{{0, 1}, {1, 0}});  // no loop
}

TEST_CASE("homomorphism search") {
    Structure edge = with_edges(2, {{0, 1}});
    Structure c3 = directed_cycle(3);
    auto h = find_homomorphism(edge, c3);
    REQUIRE(h.has_value());
    CHECK(is_homomorphism(edge, c3, *h));

    // Identity always works on the structure itself.
    Structure any = with_edges(3, {{0, 1}, {1, 2}, {2, 0}});
    auto self = find_homomorphism(any, any);
    REQUIRE(self.has_value());
    CHECK(is_homomorphism(any, any, *self));

    CHECK_FALSE(find_homomorphism(complete_graph(3), complete_graph(2)).has_value());

    // Whatever the search returns must verify.
    std::mt19937 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        Structure a = random_binary(rng, 4);
        Structure b = random_binary(rng, 3, 0.5);
        auto m = find_homomorphism(a, b);
        if (m) CHECK(is_homomorphism(a, b, *m));
    }
}

TEST_CASE("homomorphism enumeration") {
    Structure v = binary_structure(1);
    Structure b = with_edges(3, {{0, 1}});
    CHECK(enumerate_homomorphisms(v, b).size() == 3);

    Structure edge = with_edges(2, {{0, 1}});
    Structure path = directed_path(3);
    CHECK(enumerate_homomorphisms(edge, path).size() == 2);

    Structure k3 = complete_graph(3);
    CHECK(enumerate_homomorphisms(k3, k3).size() == 6);

    // Deterministic lexicographic order and limit handling.
    auto all = enumerate_homomorphisms(v, b);
    CHECK(all[0] == HomMap{0});
    CHECK(all[2] == HomMap{2});
    CHECK(enumerate_homomorphisms(k3, k3, 2).size() == 2);
}

TEST_CASE("compute_core") {
    Structure path = undirected(3, {{0, 1}, {1, 2}});
    Structure core = compute_core(path);
    CHECK(core.domain.size() == 2);
    CHECK(core.relations[0].size() == 2);
    CHECK(hom_equivalent(core, path));

    Structure k3 = complete_graph(3);
    CHECK(compute_core(k3).domain.size() == 3);

    Structure edgeless = binary_structure(5);
    CHECK(compute_core(edgeless).domain.size() == 1);
}

TEST_CASE("core invariants by enumeration") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        Structure s = random_binary(rng, 4, 0.5);
        Structure c = compute_core(s);
        CHECK(find_homomorphism(c, s).has_value());
        CHECK(find_homomorphism(s, c).has_value());
        // Every endomorphism of the core is an automorphism.
        for (const auto& endo : enumerate_homomorphisms(c, c)) {
            std::set<int> image(endo.begin(), endo.end());
            CHECK(image.size() == c.domain.size());
        }
    }
}

TEST_CASE("hom equivalence") {
    CHECK(hom_equivalent(complete_graph(2), undirected_cycle(6)));
    CHECK_FALSE(hom_equivalent(complete_graph(2), complete_graph(3)));
    Structure s = with_edges(3, {{0, 1}, {1, 2}});
    CHECK(hom_equivalent(s, s));
}

TEST_CASE("canonical query") {
    Structure edge = with_edges(2, {{0, 1}});
    TaggedQuery q = canonical_query(edge);
    CHECK(q.variables.size() == 2);
    CHECK(q.atoms.size() == 1);
    CHECK(q.free.empty());
    CHECK(q.atoms[0].first == "edge");

    Structure empty = binary_structure(0);
    TaggedQuery qe = canonical_query(empty);
    CHECK(qe.atoms.empty());
    CHECK(query_satisfied(qe, binary_structure(2)));
}

TEST_CASE("canonical query satisfaction equals homomorphism existence") {
    // Exhaustive over all structures with <= 3 elements against K2 and a
    // 3-element target.
    Structure k2 = complete_graph(2);
    Structure target3 = with_edges(3, {{0, 1}, {1, 2}, {1, 1}});
    for (int n = 0; n <= 3; ++n) {
        int bits = binary_mask_bits(n, false);
        for (uint64_t mask = 0; mask < (uint64_t{1} << bits); ++mask) {
            Structure s = binary_from_mask(n, mask, false);
            TaggedQuery q = canonical_query(s);
            CHECK(query_satisfied(q, k2) == find_homomorphism(s, k2).has_value());
            CHECK(query_satisfied(q, target3) == find_homomorphism(s, target3).has_value());
        }
    }
}
