#include "csplab/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace csplab {

size_t OperationTable::index_of(const Tuple& args) const {
    size_t idx = 0;
    for (int a : args) idx = idx * static_cast<size_t>(domain_size) + static_cast<size_t>(a);
    return idx;
}

namespace {

size_t ipow(size_t base, int exp) {
    size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

Tuple unrank(size_t idx, int arity, int d) {
    Tuple t(static_cast<size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        t[static_cast<size_t>(i)] = static_cast<int>(idx % static_cast<size_t>(d));
        idx /= static_cast<size_t>(d);
    }
    return t;
}

const Structure& finite_of(const TemplateHandle& t, const char* who) {
    if (!t.is_finite()) throw std::invalid_argument(std::string(who) + " requires a finite template");
    return t.finite;
}

/// All constraints a polymorphism table must satisfy: per relation R and per
/// componentwise-related argument tuple, the images must again lie in R.
struct PreservationConstraints {
    struct Constraint {
        int sym;
        std::vector<size_t> cells;  // table cells feeding each argument
    };
    std::vector<Constraint> all;
    std::vector<std::vector<int>> by_cell;  // cell -> constraint ids

    PreservationConstraints(const Structure& T, int m, size_t table_size, size_t budget) {
        by_cell.resize(table_size);
        for (size_t sym = 0; sym < T.sig.size(); ++sym) {
            int r = T.sig.arity(static_cast<int>(sym));
            if (r == 0) continue;
            const auto& rel = T.relations[sym];
            // Enumerate m-tuples of facts; coordinate j of the arguments is
            // fact j's tuple.
            std::vector<std::set<Tuple>::const_iterator> pick(static_cast<size_t>(m),
                                                              rel.begin());
            if (rel.empty()) continue;
            size_t combos = 1;
            for (int i = 0; i < m; ++i) combos *= rel.size();
            if (combos > budget) throw BudgetError("preservation constraints exceed budget");
            while (true) {
                Constraint c;
                c.sym = static_cast<int>(sym);
                c.cells.resize(static_cast<size_t>(r));
                for (int arg = 0; arg < r; ++arg) {
                    size_t cell = 0;
                    for (int j = 0; j < m; ++j) {
                        int v = (*pick[static_cast<size_t>(j)])[static_cast<size_t>(arg)];
                        cell = cell * T.domain.size() + static_cast<size_t>(v);
                    }
                    c.cells[static_cast<size_t>(arg)] = cell;
                }
                int id = static_cast<int>(all.size());
                all.push_back(c);
                for (size_t cell : all.back().cells) by_cell[cell].push_back(id);
                int j = m - 1;
                while (j >= 0 && ++pick[static_cast<size_t>(j)] == rel.end()) {
                    pick[static_cast<size_t>(j)] = rel.begin();
                    --j;
                }
                if (j < 0) break;
            }
        }
        for (auto& v : by_cell) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }
};

}  // namespace

Structure power_structure_alg(const TemplateHandle& t, int m, size_t budget) {
    const Structure& T = finite_of(t, "power_structure_alg");
    int d = static_cast<int>(T.domain.size());
    size_t dm = ipow(static_cast<size_t>(d), m);
    if (dm > budget) throw BudgetError("power structure exceeds budget");

    Structure p(T.sig);
    for (size_t i = 0; i < dm; ++i) {
        Tuple t2 = unrank(i, m, d);
        std::string name = "(";
        for (size_t j = 0; j < t2.size(); ++j) {
            if (j) name += ',';
            name += T.domain[static_cast<size_t>(t2[j])];
        }
        name += ')';
        p.ensure_element(name);
    }
    for (size_t sym = 0; sym < T.sig.size(); ++sym) {
        int r = T.sig.arity(static_cast<int>(sym));
        if (r == 0) {
            p.relations[sym] = T.relations[sym];
            continue;
        }
        const auto& rel = T.relations[sym];
        if (rel.empty()) continue;
        size_t combos = 1;
        for (int i = 0; i < m; ++i) combos *= rel.size();
        if (combos > budget) throw BudgetError("power structure exceeds budget");
        std::vector<std::set<Tuple>::const_iterator> pick(static_cast<size_t>(m), rel.begin());
        while (true) {
            Tuple tup(static_cast<size_t>(r));
            for (int arg = 0; arg < r; ++arg) {
                size_t vertex = 0;
                for (int j = 0; j < m; ++j)
                    vertex = vertex * static_cast<size_t>(d) +
                             static_cast<size_t>(
                                 (*pick[static_cast<size_t>(j)])[static_cast<size_t>(arg)]);
                tup[static_cast<size_t>(arg)] = static_cast<int>(vertex);
            }
            p.relations[sym].insert(std::move(tup));
            int j = m - 1;
            while (j >= 0 && ++pick[static_cast<size_t>(j)] == rel.end()) {
                pick[static_cast<size_t>(j)] = rel.begin();
                --j;
            }
            if (j < 0) break;
        }
    }
    return p;
}

std::optional<OperationTable> find_nu_polymorphism(const TemplateHandle& t, int m,
                                                   const std::vector<int>& on_subset,
                                                   size_t budget) {
    const Structure& T = finite_of(t, "find_nu_polymorphism");
    if (m < 3) throw std::invalid_argument("near-unanimity search needs arity >= 3");
    int d = static_cast<int>(T.domain.size());
    size_t table_size = ipow(static_cast<size_t>(d), m);
    if (table_size > budget) throw BudgetError("operation table exceeds budget");

    OperationTable f;
    f.arity = m;
    f.domain_size = d;
    f.table.assign(table_size, -1);

    // Pre-assign the near-unanimity entries: arguments equal to x except at
    // most one position, x and the deviant in the subset.
    for (int x : on_subset)
        for (int y : on_subset)
            for (int pos = 0; pos < m; ++pos) {
                Tuple args(static_cast<size_t>(m), x);
                args[static_cast<size_t>(pos)] = y;
                size_t cell = f.index_of(args);
                if (f.table[cell] >= 0 && f.table[cell] != x) return std::nullopt;
                f.table[cell] = x;
            }

    PreservationConstraints cons(T, m, table_size, budget);
    auto constraint_ok = [&](int id) {
        const auto& c = cons.all[static_cast<size_t>(id)];
        Tuple img(c.cells.size());
        for (size_t i = 0; i < c.cells.size(); ++i) {
            int v = f.table[c.cells[i]];
            if (v < 0) return true;  // undecided
            img[i] = v;
        }
        return T.has_fact(c.sym, img);
    };
    for (size_t id = 0; id < cons.all.size(); ++id)
        if (!constraint_ok(static_cast<int>(id))) return std::nullopt;

    std::vector<size_t> open;
    for (size_t cell = 0; cell < table_size; ++cell)
        if (f.table[cell] < 0) open.push_back(cell);

    size_t nodes = 0;
    auto rec = [&](auto&& self, size_t pos) -> bool {
        if (pos == open.size()) return true;
        if (++nodes > budget) throw BudgetError("near-unanimity search exceeded budget");
        size_t cell = open[pos];
        for (int v = 0; v < d; ++v) {
            f.table[cell] = v;
            bool ok = true;
            for (int id : cons.by_cell[cell])
                if (!constraint_ok(id)) {
                    ok = false;
                    break;
                }
            if (ok && self(self, pos + 1)) return true;
        }
        f.table[cell] = -1;
        return false;
    };
    if (rec(rec, 0)) return f;
    return std::nullopt;
}

bool verify_polymorphism(const OperationTable& f, const TemplateHandle& t) {
    const Structure& T = finite_of(t, "verify_polymorphism");
    if (f.domain_size != static_cast<int>(T.domain.size())) return false;
    if (f.table.size() != ipow(static_cast<size_t>(f.domain_size), f.arity)) return false;
    for (int v : f.table)
        if (v < 0 || v >= f.domain_size) return false;
    PreservationConstraints cons(T, f.arity, f.table.size(), SIZE_MAX);
    for (const auto& c : cons.all) {
        Tuple img(c.cells.size());
        for (size_t i = 0; i < c.cells.size(); ++i) img[i] = f.table[c.cells[i]];
        if (!T.has_fact(c.sym, img)) return false;
    }
    return true;
}

bool nu_identities_hold(const OperationTable& f, const std::vector<int>& on_subset) {
    for (int x : on_subset)
        for (int y : on_subset)
            for (int pos = 0; pos < f.arity; ++pos) {
                Tuple args(static_cast<size_t>(f.arity), x);
                args[static_cast<size_t>(pos)] = y;
                if (f.apply(args) != x) return false;
            }
    return true;
}

std::string to_csv(const OperationTable& f, const TemplateHandle& t) {
    const Structure& T = finite_of(t, "to_csv");
    std::ostringstream out;
    for (size_t cell = 0; cell < f.table.size(); ++cell) {
        Tuple args = unrank(cell, f.arity, f.domain_size);
        for (int a : args) out << T.domain[static_cast<size_t>(a)] << ',';
        out << T.domain[static_cast<size_t>(f.table[cell])] << '\n';
    }
    return out.str();
}

GlobalConsistencyReport global_consistency_probe(const Structure& instance,
                                                 const ClassSystem& cs, int l, int k) {
    const TemplateHandle& t = cs.tmpl();
    int n = static_cast<int>(instance.domain.size());
    if (n > cs.cap())
        throw BudgetError("instance size exceeds the class cap for the extension search");
    ConstraintStore store = establish_lk_consistency(instance, cs, l, k);
    if (store.failed)
        throw std::invalid_argument("global_consistency_probe requires a consistent instance");

    GlobalConsistencyReport report;

    // Facts indexed by variable, then checked over sorted subsets.
    auto facts_inside = [&](const std::vector<int>& w) {
        std::vector<std::pair<int, std::vector<int>>> out;
        for (size_t sym = 0; sym < instance.relations.size(); ++sym)
            for (const auto& tup : instance.relations[sym]) {
                std::vector<int> positions(tup.size());
                bool inside = true;
                for (size_t i = 0; i < tup.size() && inside; ++i) {
                    auto it = std::lower_bound(w.begin(), w.end(), tup[i]);
                    if (it == w.end() || *it != tup[i])
                        inside = false;
                    else
                        positions[i] = static_cast<int>(it - w.begin());
                }
                if (inside) out.emplace_back(static_cast<int>(sym), std::move(positions));
            }
        return out;
    };

    // Extension search: can (vars, class) grow to all n variables?
    auto extends = [&](auto&& self, const std::vector<int>& vars, int cls_idx) -> bool {
        int mv = static_cast<int>(vars.size());
        if (mv == n) return true;
        int v = 0;
        while (std::binary_search(vars.begin(), vars.end(), v)) ++v;
        std::vector<int> bigger = vars;
        bigger.insert(std::lower_bound(bigger.begin(), bigger.end(), v), v);
        auto old_pos = std::vector<int>{};
        for (int u : vars)
            old_pos.push_back(static_cast<int>(
                std::lower_bound(bigger.begin(), bigger.end(), u) - bigger.begin()));
        auto facts = facts_inside(bigger);
        for (int ext : cs.extensions(mv + 1, old_pos, cls_idx)) {
            bool ok = true;
            for (const auto& [sym, positions] : facts)
                if (!cs.fact_holds(sym, mv + 1, positions, ext)) {
                    ok = false;
                    break;
                }
            if (ok && self(self, bigger, ext)) return true;
        }
        return false;
    };

    // All sorted subsets in (size, lex) order, the empty set first.
    std::vector<std::vector<int>> subsets;
    subsets.push_back({});
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            subsets.push_back(cur);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    std::stable_sort(subsets.begin(), subsets.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });

    for (const auto& x : subsets) {
        int mx = static_cast<int>(x.size());
        auto facts = facts_inside(x);
        // Sub-tuples of size <= l with entry ids, for store consistency.
        std::vector<std::pair<int, std::vector<int>>> small;  // (key id, positions)
        {
            std::vector<int> c2;
            auto rec2 = [&](auto&& self, size_t start) -> void {
                if (!c2.empty()) {
                    int id = store.key_index(c2);
                    if (id >= 0) {
                        std::vector<int> pos;
                        for (int u : c2)
                            pos.push_back(static_cast<int>(
                                std::lower_bound(x.begin(), x.end(), u) - x.begin()));
                        small.emplace_back(id, std::move(pos));
                    }
                }
                if (static_cast<int>(c2.size()) == l) return;
                for (size_t i = start; i < x.size(); ++i) {
                    c2.push_back(x[i]);
                    self(self, i + 1);
                    c2.pop_back();
                }
            };
            rec2(rec2, 0);
        }
        for (int c = 0; c < cs.count(mx); ++c) {
            bool admissible = true;
            for (const auto& [sym, positions] : facts)
                if (!cs.fact_holds(sym, mx, positions, c)) {
                    admissible = false;
                    break;
                }
            if (!admissible) continue;
            for (const auto& [kid, positions] : small) {
                int r = cs.restriction_table(mx, positions)[static_cast<size_t>(c)];
                if (!store.entries[static_cast<size_t>(kid)][static_cast<size_t>(r)]) {
                    admissible = false;
                    break;
                }
            }
            if (!admissible) continue;
            ++report.assignments_checked;
            if (!extends(extends, x, c)) {
                report.globally_consistent = false;
                report.witness_vars = x;
                report.witness_class = cs.at(mx, c);
                return report;
            }
        }
    }
    return report;
}

GlobalConsistencyReport global_consistency_probe(const Structure& instance,
                                                 const TemplateHandle& t, int l, int k,
                                                 int cap) {
    int n = static_cast<int>(instance.domain.size());
    int effective = cap > 0 ? cap : std::max({kDefaultClassCap, k, n});
    ClassSystem cs(t, effective);
    return global_consistency_probe(instance, cs, l, k);
}

}  // namespace csplab
