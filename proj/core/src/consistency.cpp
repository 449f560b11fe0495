#include "csplab/consistency.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace csplab {

namespace {

void sorted_subsets(int n, int max_size, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (!cur.empty()) out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_size) return;
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
}

std::vector<std::vector<int>> subsets_of(const std::vector<int>& base, int max_size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, size_t start) -> void {
        if (!cur.empty()) out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_size) return;
        for (size_t i = start; i < base.size(); ++i) {
            cur.push_back(base[i]);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

int ConstraintStore::key_index(const std::vector<int>& vars) const {
    for (size_t i = 0; i < keys.size(); ++i)
        if (keys[i] == vars) return static_cast<int>(i);
    return -1;
}

size_t ConstraintStore::entry_size(int key) const {
    const auto& e = entries[static_cast<size_t>(key)];
    return static_cast<size_t>(std::count(e.begin(), e.end(), 1));
}

std::vector<AssignmentClass> store_classes(const ConstraintStore& store, const ClassSystem& cs,
                                           int key) {
    std::vector<AssignmentClass> out;
    int m = static_cast<int>(store.keys[static_cast<size_t>(key)].size());
    const auto& mask = store.entries[static_cast<size_t>(key)];
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(cs.at(m, static_cast<int>(i)));
    return out;
}

std::set<AssignmentClass> classes_for_tuple(const ConstraintStore& store, const ClassSystem& cs,
                                            const std::vector<int>& vars) {
    std::vector<int> key = vars;
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    int ki = store.key_index(key);
    if (ki < 0) throw std::invalid_argument("tuple has more than l distinct variables");
    std::vector<int> pattern;
    pattern.reserve(vars.size());
    for (int v : vars)
        pattern.push_back(static_cast<int>(
            std::lower_bound(key.begin(), key.end(), v) - key.begin()));
    std::set<AssignmentClass> out;
    int m = static_cast<int>(key.size());
    const auto& mask = store.entries[static_cast<size_t>(ki)];
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.insert(restrict_class(cs.at(m, static_cast<int>(i)), pattern));
    return out;
}

namespace {

/// Facts of the instance indexed per variable subset W: (symbol, positions
/// of the fact's arguments inside W).
struct FactView {
    std::vector<std::pair<int, std::vector<int>>> facts;
};

FactView facts_inside(const Structure& instance, const std::vector<int>& w) {
    FactView fv;
    for (size_t sym = 0; sym < instance.relations.size(); ++sym)
        for (const auto& t : instance.relations[sym]) {
            std::vector<int> positions(t.size());
            bool inside = true;
            for (size_t i = 0; i < t.size() && inside; ++i) {
                auto it = std::lower_bound(w.begin(), w.end(), t[i]);
                if (it == w.end() || *it != t[i])
                    inside = false;
                else
                    positions[i] = static_cast<int>(it - w.begin());
            }
            if (inside) fv.facts.emplace_back(static_cast<int>(sym), std::move(positions));
        }
    return fv;
}

}  // namespace

ConstraintStore establish_lk_consistency(const Structure& instance, const ClassSystem& cs,
                                         int l, int k, ScheduleOrder order) {
    const TemplateHandle& t = cs.tmpl();
    if (instance.sig != t.sig)
        throw std::invalid_argument("instance signature does not match template");
    if (!(1 <= l && l < k)) throw std::invalid_argument("need 1 <= l < k");
    if (k < t.sig.max_arity())
        throw std::invalid_argument("k must be at least the maximal relation arity");
    if (k > cs.cap()) throw BudgetError("k exceeds the class enumeration cap");

    int n = static_cast<int>(instance.domain.size());
    ConstraintStore store;
    store.l = l;
    store.k = k;
    sorted_subsets(n, l, store.keys);
    if (n == 0) return store;

    std::map<std::vector<int>, int> key_id;
    for (size_t i = 0; i < store.keys.size(); ++i) key_id[store.keys[i]] = static_cast<int>(i);

    // Initial entries: classes satisfying all facts inside the key tuple.
    store.entries.resize(store.keys.size());
    for (size_t ki = 0; ki < store.keys.size(); ++ki) {
        const auto& key = store.keys[ki];
        int m = static_cast<int>(key.size());
        FactView fv = facts_inside(instance, key);
        std::vector<char>& mask = store.entries[ki];
        mask.assign(static_cast<size_t>(cs.count(m)), 1);
        for (int c = 0; c < cs.count(m); ++c)
            for (const auto& [sym, positions] : fv.facts)
                if (!cs.fact_holds(sym, m, positions, c)) {
                    mask[static_cast<size_t>(c)] = 0;
                    break;
                }
        if (std::count(mask.begin(), mask.end(), 1) == 0) {
            store.failed = true;
            return store;
        }
    }

    // Supersets W of size <= k, each with its facts and its sub-keys.
    std::vector<std::vector<int>> ws;
    sorted_subsets(n, k, ws);
    struct WInfo {
        std::vector<int> vars;
        FactView facts;
        // (key id, positions of the key inside W)
        std::vector<std::pair<int, std::vector<int>>> subkeys;
    };
    std::vector<WInfo> winfos;
    winfos.reserve(ws.size());
    for (auto& w : ws) {
        WInfo wi;
        wi.vars = w;
        wi.facts = facts_inside(instance, w);
        for (const auto& sub : subsets_of(w, l)) {
            std::vector<int> positions;
            positions.reserve(sub.size());
            for (int v : sub)
                positions.push_back(static_cast<int>(
                    std::lower_bound(w.begin(), w.end(), v) - w.begin()));
            wi.subkeys.emplace_back(key_id.at(sub), std::move(positions));
        }
        winfos.push_back(std::move(wi));
    }

    // Work pairs (key, W): one per subkey occurrence.
    struct Pair {
        int key;
        int w;
        const std::vector<int>* positions;  // of key inside W
    };
    std::vector<Pair> pairs;
    std::vector<std::vector<int>> dependents(store.keys.size());  // key -> pair ids
    for (size_t wi = 0; wi < winfos.size(); ++wi)
        for (const auto& [kid, positions] : winfos[wi].subkeys) {
            pairs.push_back(Pair{kid, static_cast<int>(wi), &positions});
            // Any pair whose W contains this key depends on its entry.
        }
    for (size_t pi = 0; pi < pairs.size(); ++pi)
        for (const auto& [kid, positions] : winfos[static_cast<size_t>(pairs[pi].w)].subkeys)
            dependents[static_cast<size_t>(kid)].push_back(static_cast<int>(pi));

    std::deque<int> queue;
    std::vector<char> queued(pairs.size(), 1);
    for (size_t pi = 0; pi < pairs.size(); ++pi) queue.push_back(static_cast<int>(pi));

    std::vector<char> alive_w;  // scratch: surviving image on the key
    while (!queue.empty()) {
        int pi;
        if (order == ScheduleOrder::Fifo) {
            pi = queue.front();
            queue.pop_front();
        } else {
            pi = queue.back();
            queue.pop_back();
        }
        queued[static_cast<size_t>(pi)] = 0;
        ++store.iterations;

        const Pair& pr = pairs[static_cast<size_t>(pi)];
        const WInfo& wi = winfos[static_cast<size_t>(pr.w)];
        int wm = static_cast<int>(wi.vars.size());
        int km = static_cast<int>(store.keys[static_cast<size_t>(pr.key)].size());

        const auto& key_table = cs.restriction_table(wm, *pr.positions);
        std::vector<char> image(static_cast<size_t>(cs.count(km)), 0);
        for (int c = 0; c < cs.count(wm); ++c) {
            bool ok = true;
            for (const auto& [sym, positions] : wi.facts.facts)
                if (!cs.fact_holds(sym, wm, positions, c)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            for (const auto& [kid, positions] : wi.subkeys) {
                int r = cs.restriction_table(wm, positions)[static_cast<size_t>(c)];
                if (!store.entries[static_cast<size_t>(kid)][static_cast<size_t>(r)]) {
                    ok = false;
                    break;
                }
            }
            if (ok) image[static_cast<size_t>(key_table[static_cast<size_t>(c)])] = 1;
        }

        std::vector<char>& entry = store.entries[static_cast<size_t>(pr.key)];
        bool changed = false;
        for (size_t i = 0; i < entry.size(); ++i)
            if (entry[i] && !image[i]) {
                entry[i] = 0;
                changed = true;
            }
        if (!changed) continue;
        if (std::count(entry.begin(), entry.end(), 1) == 0) {
            store.failed = true;
            return store;
        }
        for (int dep : dependents[static_cast<size_t>(pr.key)])
            if (!queued[static_cast<size_t>(dep)]) {
                queued[static_cast<size_t>(dep)] = 1;
                queue.push_back(dep);
            }
    }
    return store;
}

ConstraintStore establish_lk_consistency(const Structure& instance, const TemplateHandle& t,
                                         int l, int k, const ConsistencyOptions& opts) {
    ClassSystem cs(t, std::max(opts.cap, k));
    return establish_lk_consistency(instance, cs, l, k, opts.order);
}

SolveReport solves_on(const Structure& instance, const TemplateHandle& t, int l, int k,
                      const ConsistencyOptions& opts) {
    SolveReport rep;
    rep.accepted = !establish_lk_consistency(instance, t, l, k, opts).failed;
    rep.agrees_with_oracle = rep.accepted == decide_csp(t, instance).satisfiable;
    return rep;
}

// ---------------------------------------------------------------------------
// Canonical program materialisation (finite templates).

namespace {

struct RelationRegistry {
    // Per arity: discovered relations in discovery order. Index 0..;
    // the empty relation may appear and carries the name empty<arity>.
    std::vector<std::vector<std::set<Tuple>>> by_arity;

    explicit RelationRegistry(int l) : by_arity(static_cast<size_t>(l) + 1) {}

    // Returns (index, was_new).
    std::pair<int, bool> intern(int arity, const std::set<Tuple>& rel) {
        auto& v = by_arity[static_cast<size_t>(arity)];
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] == rel) return {static_cast<int>(i), false};
        v.push_back(rel);
        return {static_cast<int>(v.size()) - 1, true};
    }

    std::string name(int arity, int idx) const {
        const auto& v = by_arity[static_cast<size_t>(arity)];
        if (v[static_cast<size_t>(idx)].empty()) return "empty" + std::to_string(arity);
        int dense = 0;
        for (int i = 0; i < idx; ++i)
            if (!v[static_cast<size_t>(i)].empty()) ++dense;
        return "p" + std::to_string(arity) + "_" + std::to_string(dense);
    }
};

std::string var_name(int i) { return "x" + std::to_string(i + 1); }

}  // namespace

DatalogProgram materialize_canonical_program(const TemplateHandle& t, int l, int k,
                                             size_t budget) {
    if (!t.is_finite())
        throw std::invalid_argument("materialize_canonical_program requires a finite template");
    if (!(1 <= l && l < k)) throw std::invalid_argument("need 1 <= l < k");
    const Structure& T = t.finite;
    int d = static_cast<int>(T.domain.size());

    RelationRegistry registry(l);
    std::set<std::string> seen_rules;
    std::vector<std::string> rule_texts;
    size_t steps = 0;
    auto spend = [&](size_t cost) {
        steps += cost;
        if (steps > budget)
            throw BudgetError("canonical program enumeration exceeded budget");
    };

    auto atom_text = [&](const std::string& sym, const std::vector<int>& vars) {
        std::string s = sym;
        if (!vars.empty()) {
            s += '(';
            for (size_t i = 0; i < vars.size(); ++i) {
                if (i) s += ',';
                s += var_name(vars[i]);
            }
            s += ')';
        }
        return s;
    };

    auto emit = [&](const std::string& head, const std::vector<std::string>& body) {
        std::string text = head + " :- ";
        for (size_t i = 0; i < body.size(); ++i) {
            if (i) text += ", ";
            text += body[i];
        }
        text += ".";
        if (seen_rules.insert(text).second) rule_texts.push_back(text);
    };

    bool grew = true;
    while (grew) {
        grew = false;
        for (int w = 1; w <= k; ++w) {
            // All EDB atom patterns over variables x1..xw.
            std::vector<std::pair<int, std::vector<int>>> edb_atoms;
            for (size_t sym = 0; sym < T.sig.size(); ++sym) {
                int r = T.sig.arity(static_cast<int>(sym));
                std::vector<int> pos(static_cast<size_t>(r), 0);
                if (r == 0) continue;  // 0-ary EDBs carry no variables
                while (true) {
                    edb_atoms.emplace_back(static_cast<int>(sym), pos);
                    int i = r - 1;
                    while (i >= 0 && pos[static_cast<size_t>(i)] == w - 1) {
                        pos[static_cast<size_t>(i)] = 0;
                        --i;
                    }
                    if (i < 0) break;
                    ++pos[static_cast<size_t>(i)];
                }
            }
            if (edb_atoms.size() > 20)
                throw BudgetError("too many EDB atom patterns for materialisation");

            // IDB slots: sorted variable subsets of size 1..l.
            std::vector<std::vector<int>> slots;
            {
                std::vector<std::vector<int>> subs;
                sorted_subsets(w, l, subs);
                slots = std::move(subs);
            }

            // Option lists per slot: -1 = no atom, otherwise a registered
            // nonempty proper relation of matching arity.
            std::vector<std::vector<int>> options(slots.size());
            for (size_t si = 0; si < slots.size(); ++si) {
                options[si].push_back(-1);
                int ar = static_cast<int>(slots[si].size());
                const auto& v = registry.by_arity[static_cast<size_t>(ar)];
                for (size_t i = 0; i < v.size(); ++i)
                    if (!v[i].empty()) options[si].push_back(static_cast<int>(i));
            }

            // Head candidates: sorted subsets of size 0..l.
            std::vector<std::vector<int>> heads;
            heads.push_back({});
            {
                std::vector<std::vector<int>> subs;
                sorted_subsets(w, l, subs);
                for (auto& s : subs) heads.push_back(std::move(s));
            }

            uint64_t pattern_count = uint64_t{1} << edb_atoms.size();
            for (uint64_t pmask = 0; pmask < pattern_count; ++pmask) {
                // Mixed-radix walk over slot options.
                size_t sigma_count = 1;
                for (int i = 0; i < w; ++i) sigma_count *= static_cast<size_t>(d);
                std::vector<size_t> pick(slots.size(), 0);
                while (true) {
                    spend(sigma_count);

                    // Variable coverage check.
                    std::vector<char> covered(static_cast<size_t>(w), 0);
                    for (size_t ai = 0; ai < edb_atoms.size(); ++ai)
                        if (pmask & (uint64_t{1} << ai))
                            for (int p : edb_atoms[ai].second)
                                covered[static_cast<size_t>(p)] = 1;
                    bool any_idb = false;
                    for (size_t si = 0; si < slots.size(); ++si)
                        if (options[si][pick[si]] >= 0) {
                            any_idb = true;
                            for (int p : slots[si]) covered[static_cast<size_t>(p)] = 1;
                        }
                    bool all_covered = true;
                    for (char c : covered) all_covered &= (c != 0);
                    bool empty_body = pmask == 0 && !any_idb;

                    if (all_covered && !empty_body) {
                        // Evaluate the join over D^w.
                        std::vector<Tuple> join;
                        Tuple sigma(static_cast<size_t>(w), 0);
                        while (true) {
                            bool ok = true;
                            for (size_t ai = 0; ai < edb_atoms.size() && ok; ++ai) {
                                if (!(pmask & (uint64_t{1} << ai))) continue;
                                const auto& [sym, pos] = edb_atoms[ai];
                                Tuple img(pos.size());
                                for (size_t j = 0; j < pos.size(); ++j)
                                    img[j] = sigma[static_cast<size_t>(pos[j])];
                                ok = T.has_fact(sym, img);
                            }
                            for (size_t si = 0; si < slots.size() && ok; ++si) {
                                int opt = options[si][pick[si]];
                                if (opt < 0) continue;
                                Tuple img(slots[si].size());
                                for (size_t j = 0; j < slots[si].size(); ++j)
                                    img[j] = sigma[static_cast<size_t>(slots[si][j])];
                                ok = registry.by_arity[slots[si].size()][static_cast<size_t>(opt)]
                                         .count(img) > 0;
                            }
                            if (ok) join.push_back(sigma);
                            int i = w - 1;
                            while (i >= 0 && sigma[static_cast<size_t>(i)] == d - 1) {
                                sigma[static_cast<size_t>(i)] = 0;
                                --i;
                            }
                            if (i < 0) break;
                            ++sigma[static_cast<size_t>(i)];
                        }

                        // Body text, shared by all heads.
                        std::vector<std::string> body;
                        for (size_t ai = 0; ai < edb_atoms.size(); ++ai)
                            if (pmask & (uint64_t{1} << ai))
                                body.push_back(atom_text(T.sig.name(edb_atoms[ai].first),
                                                         edb_atoms[ai].second));
                        for (size_t si = 0; si < slots.size(); ++si) {
                            int opt = options[si][pick[si]];
                            if (opt >= 0)
                                body.push_back(atom_text(
                                    registry.name(static_cast<int>(slots[si].size()), opt),
                                    slots[si]));
                        }

                        for (const auto& h : heads) {
                            if (join.empty()) {
                                if (h.empty()) {
                                    emit("false", body);
                                } else {
                                    auto [idx, fresh] =
                                        registry.intern(static_cast<int>(h.size()), {});
                                    grew |= fresh;
                                    emit(atom_text(registry.name(static_cast<int>(h.size()), idx),
                                                   h),
                                         body);
                                }
                                continue;
                            }
                            if (h.empty()) continue;
                            std::set<Tuple> proj;
                            for (const auto& s : join) {
                                Tuple img(h.size());
                                for (size_t j = 0; j < h.size(); ++j)
                                    img[j] = s[static_cast<size_t>(h[j])];
                                proj.insert(std::move(img));
                            }
                            size_t full = 1;
                            for (size_t j = 0; j < h.size(); ++j) full *= static_cast<size_t>(d);
                            if (proj.size() == full) continue;  // no information
                            auto [idx, fresh] =
                                registry.intern(static_cast<int>(h.size()), proj);
                            grew |= fresh;
                            emit(atom_text(registry.name(static_cast<int>(h.size()), idx), h),
                                 body);
                        }
                    }

                    // Advance the mixed-radix counter.
                    size_t si = 0;
                    while (si < pick.size() && pick[si] + 1 == options[si].size()) {
                        pick[si] = 0;
                        ++si;
                    }
                    if (si == pick.size()) break;
                    ++pick[si];
                }
            }
        }
    }

    // Forwarding rules for registered empty relations.
    for (int ar = 1; ar <= l; ++ar) {
        const auto& v = registry.by_arity[static_cast<size_t>(ar)];
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i].empty()) {
                std::vector<int> vars(static_cast<size_t>(ar));
                for (int j = 0; j < ar; ++j) vars[static_cast<size_t>(j)] = j;
                emit("false", {atom_text(registry.name(ar, static_cast<int>(i)), vars)});
            }
    }

    // Assemble the program text and parse it through the front door so all
    // invariants get validated.
    std::ostringstream text;
    for (const auto& [name, ar] : T.sig.symbols) text << "edb " << name << ' ' << ar << '\n';
    for (int ar = 1; ar <= l; ++ar) {
        const auto& v = registry.by_arity[static_cast<size_t>(ar)];
        for (size_t i = 0; i < v.size(); ++i)
            text << "idb " << registry.name(ar, static_cast<int>(i)) << ' ' << ar << '\n';
    }
    for (const auto& r : rule_texts) text << r << '\n';
    return parse_program(text.str());
}

// ---------------------------------------------------------------------------
// Arc consistency and the power-structure test.

ArcResult arc_consistency(const Structure& instance, const TemplateHandle& t) {
    if (!t.is_finite()) throw std::invalid_argument("arc_consistency requires a finite template");
    if (instance.sig != t.sig)
        throw std::invalid_argument("instance signature does not match template");
    const Structure& T = t.finite;
    int d = static_cast<int>(T.domain.size());
    size_t n = instance.domain.size();

    std::vector<std::vector<char>> dom(n, std::vector<char>(static_cast<size_t>(d), 1));
    ArcResult res;

    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t sym = 0; sym < instance.relations.size(); ++sym) {
            for (const auto& fact : instance.relations[sym]) {
                for (size_t j = 0; j < fact.size(); ++j) {
                    size_t var = static_cast<size_t>(fact[j]);
                    for (int a = 0; a < d; ++a) {
                        if (!dom[var][static_cast<size_t>(a)]) continue;
                        // Positional support: partner entries only need to
                        // lie in their variable's domain. Repeated variables
                        // are not bound to equal values, matching the power
                        // structure's support condition.
                        bool supported = false;
                        for (const auto& tt : T.relations[sym]) {
                            if (tt[j] != a) continue;
                            bool ok = true;
                            for (size_t i = 0; i < fact.size() && ok; ++i) {
                                if (i == j) continue;
                                ok = dom[static_cast<size_t>(fact[i])]
                                        [static_cast<size_t>(tt[i])] != 0;
                            }
                            if (ok) {
                                supported = true;
                                break;
                            }
                        }
                        if (!supported) {
                            dom[var][static_cast<size_t>(a)] = 0;
                            changed = true;
                        }
                    }
                }
            }
        }
    }

    res.domains.resize(n);
    for (size_t v = 0; v < n; ++v) {
        for (int a = 0; a < d; ++a)
            if (dom[v][static_cast<size_t>(a)]) res.domains[v].push_back(a);
        if (res.domains[v].empty()) res.failed = true;
    }
    return res;
}

Structure power_structure(const TemplateHandle& t, int cap) {
    Structure p(t.sig);
    if (t.is_finite()) {
        const Structure& T = t.finite;
        int d = static_cast<int>(T.domain.size());
        if (d > cap) throw BudgetError("power structure cap exceeded");
        int subsets = (1 << d) - 1;
        std::vector<std::vector<int>> members;
        for (int mask = 1; mask <= subsets; ++mask) {
            std::vector<int> elems;
            std::string name = "{";
            for (int e = 0; e < d; ++e)
                if (mask & (1 << e)) {
                    if (!elems.empty()) name += ',';
                    name += T.domain[static_cast<size_t>(e)];
                    elems.push_back(e);
                }
            name += '}';
            p.ensure_element(name);
            members.push_back(std::move(elems));
        }
        for (size_t sym = 0; sym < T.sig.size(); ++sym) {
            int r = T.sig.arity(static_cast<int>(sym));
            if (r == 0) {
                if (!T.relations[sym].empty()) p.relations[sym].insert(Tuple{});
                continue;
            }
            Tuple pick(static_cast<size_t>(r), 0);
            while (true) {
                bool holds = true;
                for (int j = 0; j < r && holds; ++j) {
                    for (int a : members[static_cast<size_t>(pick[static_cast<size_t>(j)])]) {
                        bool witness = false;
                        for (const auto& tt : T.relations[sym]) {
                            if (tt[static_cast<size_t>(j)] != a) continue;
                            bool ok = true;
                            for (int i = 0; i < r && ok; ++i) {
                                if (i == j) continue;
                                const auto& mem =
                                    members[static_cast<size_t>(pick[static_cast<size_t>(i)])];
                                ok = std::find(mem.begin(), mem.end(),
                                               tt[static_cast<size_t>(i)]) != mem.end();
                            }
                            if (ok) {
                                witness = true;
                                break;
                            }
                        }
                        if (!witness) {
                            holds = false;
                            break;
                        }
                    }
                }
                if (holds) p.relations[sym].insert(pick);
                int i = r - 1;
                while (i >= 0 && pick[static_cast<size_t>(i)] == subsets - 1) {
                    pick[static_cast<size_t>(i)] = 0;
                    --i;
                }
                if (i < 0) break;
                ++pick[static_cast<size_t>(i)];
            }
        }
        return p;
    }

    // Oracle kinds: one vertex per unary class; a relation holds when some
    // class of matching arity restricts to the chosen unary classes and
    // satisfies the relation.
    int arity_cap = std::max(2, t.sig.max_arity());
    auto unary = classes(t, 1, arity_cap);
    for (size_t i = 0; i < unary.size(); ++i) p.ensure_element("c" + std::to_string(i));
    for (size_t sym = 0; sym < t.sig.size(); ++sym) {
        int r = t.sig.arity(static_cast<int>(sym));
        if (r == 0) continue;
        auto all = classes(t, r, arity_cap);
        Tuple pick(static_cast<size_t>(r), 0);
        while (true) {
            bool holds = false;
            for (const auto& e : all) {
                if (!class_holds(t, static_cast<int>(sym), e)) continue;
                bool match = true;
                for (int j = 0; j < r && match; ++j) {
                    std::vector<int> pos{j};
                    match = restrict_class(e, pos) ==
                            unary[static_cast<size_t>(pick[static_cast<size_t>(j)])];
                }
                if (match) {
                    holds = true;
                    break;
                }
            }
            if (holds) p.relations[sym].insert(pick);
            int i = r - 1;
            while (i >= 0 && pick[static_cast<size_t>(i)] == static_cast<int>(unary.size()) - 1) {
                pick[static_cast<size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++pick[static_cast<size_t>(i)];
        }
    }
    return p;
}

bool ac_solves(const TemplateHandle& t, int cap) {
    Structure p = power_structure(t, cap);
    if (t.is_finite()) return find_homomorphism(p, t.finite).has_value();
    // The two oracle templates are irreflexive, so any constant tuple in the
    // power structure obstructs a homomorphism; without one, the single
    // unary class maps by the extension property.
    for (const auto& rel : p.relations)
        for (const auto& tt : rel) {
            bool constant = !tt.empty();
            for (int e : tt) constant &= (e == tt[0]);
            if (constant) return false;
        }
    return true;
}

}  // namespace csplab
