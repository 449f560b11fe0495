#include "csplab/template_oracle.hpp"

#include <algorithm>
#include <sstream>

namespace csplab {

TemplateHandle TemplateHandle::finite_template(Structure s) {
    if (s.domain.empty())
        throw std::invalid_argument("finite template must have a nonempty domain");
    TemplateHandle t;
    t.kind = TemplateKind::Finite;
    t.sig = s.sig;
    t.finite = std::move(s);
    return t;
}

TemplateHandle TemplateHandle::qorder() {
    TemplateHandle t;
    t.kind = TemplateKind::QOrder;
    t.sig.add("<", 2);
    return t;
}

TemplateHandle TemplateHandle::henson() {
    TemplateHandle t;
    t.kind = TemplateKind::Henson;
    t.sig.add("E", 2);
    return t;
}

std::string TemplateHandle::describe() const {
    switch (kind) {
        case TemplateKind::Finite:
            return "finite(n=" + std::to_string(finite.domain.size()) + ")";
        case TemplateKind::QOrder:
            return "qorder";
        case TemplateKind::Henson:
            return "henson";
    }
    return "?";
}

TemplateHandle parse_template_selector(const std::string& selector) {
    if (selector == "qorder") return TemplateHandle::qorder();
    if (selector == "henson") return TemplateHandle::henson();
    const std::string prefix = "finite:";
    if (selector.rfind(prefix, 0) == 0)
        return TemplateHandle::finite_template(load_structure(selector.substr(prefix.size())));
    throw std::invalid_argument("bad template selector '" + selector +
                                "' (expected finite:<path>, qorder, or henson)");
}

std::string to_text(const AssignmentClass& c, const TemplateHandle& t) {
    std::ostringstream out;
    switch (c.kind) {
        case TemplateKind::Finite: {
            out << '(';
            for (int i = 0; i < c.arity; ++i) {
                if (i) out << ',';
                int e = c.payload[static_cast<size_t>(i)];
                if (t.is_finite() && static_cast<size_t>(e) < t.finite.domain.size())
                    out << t.finite.domain[static_cast<size_t>(e)];
                else
                    out << e;
            }
            out << ')';
            break;
        }
        case TemplateKind::QOrder: {
            // Positions grouped by rank, ranks separated by '<'.
            int blocks = c.payload.empty()
                             ? 0
                             : *std::max_element(c.payload.begin(), c.payload.end()) + 1;
            for (int r = 0; r < blocks; ++r) {
                if (r) out << '<';
                bool first = true;
                for (int i = 0; i < c.arity; ++i)
                    if (c.payload[static_cast<size_t>(i)] == r) {
                        if (!first) out << '=';
                        first = false;
                        out << 'p' << i;
                    }
            }
            if (blocks == 0) out << "()";
            break;
        }
        case TemplateKind::Henson: {
            out << "blocks[";
            for (int i = 0; i < c.arity; ++i) {
                if (i) out << ',';
                out << c.payload[static_cast<size_t>(i)];
            }
            out << "] edges{";
            for (size_t i = 0; i < c.edges.size(); ++i) {
                if (i) out << ',';
                out << c.edges[i].first << '-' << c.edges[i].second;
            }
            out << '}';
            break;
        }
    }
    return out.str();
}

namespace {

/// All canonical rank vectors of length m (weak linear orders): ranks form
/// an initial segment 0..B-1 with every rank below the maximum used.
void enumerate_weak_orders(int m, std::vector<AssignmentClass>& out) {
    std::vector<int> ranks(static_cast<size_t>(m), 0);
    auto emit = [&]() {
        int mx = -1;
        std::vector<char> seen(static_cast<size_t>(m), 0);
        for (int r : ranks) {
            mx = std::max(mx, r);
            seen[static_cast<size_t>(r)] = 1;
        }
        for (int r = 0; r <= mx; ++r)
            if (!seen[static_cast<size_t>(r)]) return;
        AssignmentClass c;
        c.kind = TemplateKind::QOrder;
        c.arity = m;
        c.payload = ranks;
        out.push_back(std::move(c));
    };
    if (m == 0) {
        AssignmentClass c;
        c.kind = TemplateKind::QOrder;
        out.push_back(c);
        return;
    }
    while (true) {
        emit();
        int i = m - 1;
        while (i >= 0 && ranks[static_cast<size_t>(i)] == m - 1) {
            ranks[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++ranks[static_cast<size_t>(i)];
    }
}

/// Set partitions of m positions in restricted-growth order, paired with all
/// loop-free triangle-free graphs on the blocks.
void enumerate_henson_classes(int m, std::vector<AssignmentClass>& out) {
    if (m == 0) {
        AssignmentClass c;
        c.kind = TemplateKind::Henson;
        out.push_back(c);
        return;
    }
    std::vector<int> block(static_cast<size_t>(m), 0);
    auto emit_partition = [&]() {
        int blocks = *std::max_element(block.begin(), block.end()) + 1;
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < blocks; ++i)
            for (int j = i + 1; j < blocks; ++j) pairs.emplace_back(i, j);
        for (uint64_t mask = 0; mask < (uint64_t{1} << pairs.size()); ++mask) {
            std::vector<std::pair<int, int>> edges;
            for (size_t p = 0; p < pairs.size(); ++p)
                if (mask & (uint64_t{1} << p)) edges.push_back(pairs[p]);
            // Reject triangles.
            bool triangle = false;
            for (size_t a = 0; a < edges.size() && !triangle; ++a)
                for (size_t b = a + 1; b < edges.size() && !triangle; ++b)
                    for (size_t c2 = b + 1; c2 < edges.size() && !triangle; ++c2) {
                        std::set<int> verts{edges[a].first, edges[a].second,
                                            edges[b].first, edges[b].second,
                                            edges[c2].first, edges[c2].second};
                        if (verts.size() == 3) triangle = true;
                    }
            if (triangle) continue;
            AssignmentClass c;
            c.kind = TemplateKind::Henson;
            c.arity = m;
            c.payload = block;
            c.edges = edges;
            out.push_back(std::move(c));
        }
    };
    // Restricted growth strings: block[0] = 0, block[i] <= max(block[0..i-1]) + 1.
    auto rec = [&](auto&& self, int i, int mx) -> void {
        if (i == m) {
            emit_partition();
            return;
        }
        for (int b = 0; b <= mx + 1; ++b) {
            block[static_cast<size_t>(i)] = b;
            self(self, i + 1, std::max(mx, b));
        }
    };
    rec(rec, 0, -1);
}

void enumerate_finite_tuples(const Structure& tmpl, int m, std::vector<AssignmentClass>& out) {
    int n = static_cast<int>(tmpl.domain.size());
    std::vector<int> tup(static_cast<size_t>(m), 0);
    if (m == 0) {
        AssignmentClass c;
        c.kind = TemplateKind::Finite;
        out.push_back(c);
        return;
    }
    while (true) {
        AssignmentClass c;
        c.kind = TemplateKind::Finite;
        c.arity = m;
        c.payload = tup;
        out.push_back(std::move(c));
        int i = m - 1;
        while (i >= 0 && tup[static_cast<size_t>(i)] == n - 1) {
            tup[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++tup[static_cast<size_t>(i)];
    }
}

}  // namespace

std::vector<AssignmentClass> classes(const TemplateHandle& t, int m, int cap) {
    if (m < 0) throw std::invalid_argument("negative arity");
    if (m > cap)
        throw BudgetError("class enumeration cap exceeded: arity " + std::to_string(m) +
                          " > cap " + std::to_string(cap));
    std::vector<AssignmentClass> out;
    switch (t.kind) {
        case TemplateKind::Finite:
            enumerate_finite_tuples(t.finite, m, out);
            break;
        case TemplateKind::QOrder:
            enumerate_weak_orders(m, out);
            break;
        case TemplateKind::Henson:
            enumerate_henson_classes(m, out);
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

AssignmentClass restrict_class(const AssignmentClass& c, std::span<const int> positions) {
    for (int p : positions)
        if (p < 0 || p >= c.arity)
            throw std::invalid_argument("restriction position out of range");
    AssignmentClass r;
    r.kind = c.kind;
    r.arity = static_cast<int>(positions.size());
    switch (c.kind) {
        case TemplateKind::Finite:
            for (int p : positions) r.payload.push_back(c.payload[static_cast<size_t>(p)]);
            break;
        case TemplateKind::QOrder: {
            std::vector<int> raw;
            for (int p : positions) raw.push_back(c.payload[static_cast<size_t>(p)]);
            // Order-preserving compression of the used ranks.
            std::vector<int> sorted = raw;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            for (int v : raw)
                r.payload.push_back(static_cast<int>(
                    std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()));
            break;
        }
        case TemplateKind::Henson: {
            std::vector<int> raw;
            for (int p : positions) raw.push_back(c.payload[static_cast<size_t>(p)]);
            // Renumber blocks by least new position.
            std::vector<int> relabel(c.payload.size(), -1);
            int next = 0;
            for (int v : raw) {
                if (relabel[static_cast<size_t>(v)] < 0) relabel[static_cast<size_t>(v)] = next++;
                r.payload.push_back(relabel[static_cast<size_t>(v)]);
            }
            std::set<std::pair<int, int>> kept;
            for (const auto& [a, b] : c.edges) {
                int ra = relabel[static_cast<size_t>(a)];
                int rb = relabel[static_cast<size_t>(b)];
                if (ra < 0 || rb < 0) continue;
                kept.insert({std::min(ra, rb), std::max(ra, rb)});
            }
            r.edges.assign(kept.begin(), kept.end());
            break;
        }
    }
    return r;
}

bool class_holds(const TemplateHandle& t, int sym, const AssignmentClass& c) {
    if (t.sig.arity(sym) != c.arity)
        throw std::invalid_argument("class arity does not match symbol arity");
    switch (t.kind) {
        case TemplateKind::Finite:
            return t.finite.has_fact(sym, c.payload);
        case TemplateKind::QOrder:
            return c.payload[0] < c.payload[1];
        case TemplateKind::Henson: {
            int a = c.payload[0], b = c.payload[1];
            if (a == b) return false;
            std::pair<int, int> e{std::min(a, b), std::max(a, b)};
            return std::find(c.edges.begin(), c.edges.end(), e) != c.edges.end();
        }
    }
    return false;
}

bool class_holds(const TemplateHandle& t, std::string_view sym, const AssignmentClass& c) {
    int s = t.sig.index_of(sym);
    if (s < 0) throw std::invalid_argument("unknown symbol " + std::string(sym));
    return class_holds(t, s, c);
}

namespace {

OracleDecision decide_qorder(const Structure& instance) {
    OracleDecision d;
    size_t n = instance.domain.size();
    std::vector<std::vector<int>> succ(n);
    std::vector<int> indeg(n, 0);
    bool self_loop = false;
    for (const auto& t : instance.relations[0]) {
        if (t[0] == t[1]) self_loop = true;
        succ[static_cast<size_t>(t[0])].push_back(t[1]);
        ++indeg[static_cast<size_t>(t[1])];
    }
    if (self_loop) {
        d.satisfiable = false;
        return d;
    }
    // Kahn's algorithm; smallest-index-first for a deterministic witness.
    std::vector<int> order;
    std::set<int> ready;
    for (size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.insert(static_cast<int>(v));
    while (!ready.empty()) {
        int v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (int w : succ[static_cast<size_t>(v)])
            if (--indeg[static_cast<size_t>(w)] == 0) ready.insert(w);
    }
    if (order.size() == n) {
        d.satisfiable = true;
        d.topo_order = order;
    } else {
        d.satisfiable = false;
    }
    return d;
}

OracleDecision decide_henson(const Structure& instance) {
    OracleDecision d;
    size_t n = instance.domain.size();
    std::vector<std::set<int>> adj(n);
    for (const auto& t : instance.relations[0]) {
        if (t[0] == t[1]) {
            d.satisfiable = false;
            d.bad_triple = {t[0], t[0], t[0]};
            return d;
        }
        adj[static_cast<size_t>(t[0])].insert(t[1]);
        adj[static_cast<size_t>(t[1])].insert(t[0]);
    }
    for (size_t a = 0; a < n; ++a)
        for (int b : adj[a]) {
            if (b <= static_cast<int>(a)) continue;
            for (int c : adj[static_cast<size_t>(b)]) {
                if (c <= b) continue;
                if (adj[a].count(c)) {
                    d.satisfiable = false;
                    d.bad_triple = {static_cast<int>(a), b, c};
                    return d;
                }
            }
        }
    d.satisfiable = true;
    return d;
}

}  // namespace

OracleDecision decide_csp(const TemplateHandle& t, const Structure& instance) {
    if (instance.sig != t.sig)
        throw std::invalid_argument("instance signature does not match template");
    OracleDecision d;
    switch (t.kind) {
        case TemplateKind::Finite: {
            auto h = find_homomorphism(instance, t.finite);
            d.satisfiable = h.has_value();
            d.hom = h;
            return d;
        }
        case TemplateKind::QOrder:
            return decide_qorder(instance);
        case TemplateKind::Henson:
            return decide_henson(instance);
    }
    return d;
}

AssignmentClass class_of_assignment(const TemplateHandle& t, const Tuple& tuple) {
    if (!t.is_finite())
        throw std::invalid_argument("class_of_assignment requires a finite template");
    for (int e : tuple)
        if (e < 0 || static_cast<size_t>(e) >= t.finite.domain.size())
            throw std::invalid_argument("tuple entry outside template domain");
    AssignmentClass c;
    c.kind = TemplateKind::Finite;
    c.arity = static_cast<int>(tuple.size());
    c.payload = tuple;
    return c;
}

}  // namespace csplab
