#include "csplab/pebble.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace csplab {

namespace {

struct SubsetInfo {
    std::vector<int> vars;  // sorted
    std::vector<std::pair<int, std::vector<int>>> facts;  // (sym, positions) inside vars
    std::vector<std::pair<int, const std::vector<int>*>> immediate_subsets;  // (id, table)
    std::vector<int> immediate_supersets;                                    // ids
    // For |vars| <= l: all strict supersets of size <= k with the positions
    // of vars inside the superset.
    struct Target {
        int id;
        std::vector<int> positions;
    };
    std::vector<Target> targets;
    // All strict subsets of size <= l with restriction tables, for
    // re-enqueueing extension checks.
    std::vector<std::pair<int, const std::vector<int>*>> small_subsets;
};

struct GameState {
    const Structure& instance;
    const ClassSystem& cs;
    int l, k;
    std::vector<SubsetInfo> subsets;
    std::map<std::vector<int>, int> subset_id;
    std::vector<std::vector<char>> alive;

    enum class CauseKind { None, Fact, Extension, Restriction };
    struct Cause {
        CauseKind kind = CauseKind::None;
        int target_subset = -1;  // Extension: the unreachable superset;
                                 // Restriction: the dead subset
        int target_class = -1;   // Restriction only
        long seq = -1;
    };
    std::vector<std::vector<Cause>> causes;
};

std::vector<int> positions_within(const std::vector<int>& inner, const std::vector<int>& outer) {
    std::vector<int> pos;
    pos.reserve(inner.size());
    for (int v : inner)
        pos.push_back(static_cast<int>(
            std::lower_bound(outer.begin(), outer.end(), v) - outer.begin()));
    return pos;
}

void collect_facts(const Structure& instance, const std::vector<int>& w,
                   std::vector<std::pair<int, std::vector<int>>>& out) {
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
            if (inside) out.emplace_back(static_cast<int>(sym), std::move(positions));
        }
}

GameState build_state(const Structure& instance, const ClassSystem& cs, int l, int k) {
    const TemplateHandle& t = cs.tmpl();
    if (instance.sig != t.sig)
        throw std::invalid_argument("instance signature does not match template");
    if (!(1 <= l && l < k)) throw std::invalid_argument("need 1 <= l < k");
    if (k > cs.cap()) throw BudgetError("k exceeds the class enumeration cap");

    GameState st{instance, cs, l, k, {}, {}, {}, {}};
    int n = static_cast<int>(instance.domain.size());

    // All sorted subsets of size 0..k, largest first so the initial sweep
    // processes big domains before small ones.
    std::vector<std::vector<int>> all;
    all.push_back({});
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) return;
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            all.push_back(cur);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });

    st.subsets.resize(all.size());
    for (size_t i = 0; i < all.size(); ++i) {
        st.subsets[i].vars = all[i];
        st.subset_id[all[i]] = static_cast<int>(i);
    }
    for (size_t i = 0; i < st.subsets.size(); ++i) {
        SubsetInfo& si = st.subsets[i];
        collect_facts(instance, si.vars, si.facts);
        int m = static_cast<int>(si.vars.size());
        // Immediate subsets.
        for (size_t drop = 0; drop < si.vars.size(); ++drop) {
            std::vector<int> sub;
            std::vector<int> pos;
            for (size_t j = 0; j < si.vars.size(); ++j)
                if (j != drop) {
                    sub.push_back(si.vars[j]);
                    pos.push_back(static_cast<int>(j));
                }
            int id = st.subset_id.at(sub);
            si.immediate_subsets.emplace_back(id, &cs.restriction_table(m, pos));
            st.subsets[static_cast<size_t>(id)].immediate_supersets.push_back(
                static_cast<int>(i));
        }
        // Strict subsets of size <= l (the empty subset included).
        std::vector<std::vector<int>> subs;
        subs.push_back({});
        std::vector<int> c2;
        auto rec2 = [&](auto&& self, size_t start) -> void {
            if (!c2.empty() && c2.size() < si.vars.size()) subs.push_back(c2);
            if (static_cast<int>(c2.size()) == l) return;
            for (size_t j = start; j < si.vars.size(); ++j) {
                c2.push_back(si.vars[j]);
                self(self, j + 1);
                c2.pop_back();
            }
        };
        rec2(rec2, 0);
        for (const auto& sub : subs) {
            if (sub.empty() && si.vars.empty()) continue;
            int id = st.subset_id.at(sub);
            si.small_subsets.emplace_back(
                id, &cs.restriction_table(m, positions_within(sub, si.vars)));
        }
    }
    // Extension targets for subsets of size <= l.
    for (size_t i = 0; i < st.subsets.size(); ++i) {
        SubsetInfo& si = st.subsets[i];
        if (static_cast<int>(si.vars.size()) > l) continue;
        for (size_t j = 0; j < st.subsets.size(); ++j) {
            if (j == i) continue;
            const auto& big = st.subsets[j].vars;
            if (big.size() <= si.vars.size()) continue;
            if (!std::includes(big.begin(), big.end(), si.vars.begin(), si.vars.end()))
                continue;
            si.targets.push_back(
                SubsetInfo::Target{static_cast<int>(j), positions_within(si.vars, big)});
        }
        // Deterministic target order: smaller supersets first, then lex.
        std::stable_sort(si.targets.begin(), si.targets.end(),
                         [&](const auto& a, const auto& b) {
                             const auto& va = st.subsets[static_cast<size_t>(a.id)].vars;
                             const auto& vb = st.subsets[static_cast<size_t>(b.id)].vars;
                             if (va.size() != vb.size()) return va.size() < vb.size();
                             return va < vb;
                         });
    }

    // Initial alive masks: classes satisfying the facts inside the subset.
    st.alive.resize(st.subsets.size());
    st.causes.resize(st.subsets.size());
    for (size_t i = 0; i < st.subsets.size(); ++i) {
        int m = static_cast<int>(st.subsets[i].vars.size());
        st.alive[i].assign(static_cast<size_t>(cs.count(m)), 1);
        st.causes[i].assign(static_cast<size_t>(cs.count(m)), GameState::Cause{});
        for (int c = 0; c < cs.count(m); ++c)
            for (const auto& [sym, positions] : st.subsets[i].facts)
                if (!cs.fact_holds(sym, m, positions, c)) {
                    st.alive[i][static_cast<size_t>(c)] = 0;
                    st.causes[i][static_cast<size_t>(c)] =
                        GameState::Cause{GameState::CauseKind::Fact, -1, -1, -1};
                    break;
                }
    }
    return st;
}

void run_fixpoint(GameState& st) {
    std::deque<std::pair<int, int>> queue;
    std::vector<std::vector<char>> queued(st.subsets.size());
    for (size_t i = 0; i < st.subsets.size(); ++i) {
        queued[i].assign(st.alive[i].size(), 0);
        for (size_t c = 0; c < st.alive[i].size(); ++c)
            if (st.alive[i][c]) {
                queue.emplace_back(static_cast<int>(i), static_cast<int>(c));
                queued[i][c] = 1;
            }
    }
    long seq = 0;
    while (!queue.empty()) {
        auto [wi, c] = queue.front();
        queue.pop_front();
        queued[static_cast<size_t>(wi)][static_cast<size_t>(c)] = 0;
        if (!st.alive[static_cast<size_t>(wi)][static_cast<size_t>(c)]) continue;
        const SubsetInfo& si = st.subsets[static_cast<size_t>(wi)];

        GameState::Cause cause;
        // Restriction closure through immediate subsets.
        for (const auto& [sub_id, table] : si.immediate_subsets) {
            int r = (*table)[static_cast<size_t>(c)];
            if (!st.alive[static_cast<size_t>(sub_id)][static_cast<size_t>(r)]) {
                cause = GameState::Cause{GameState::CauseKind::Restriction, sub_id, r, seq};
                break;
            }
        }
        // Extension property for small domains.
        if (cause.kind == GameState::CauseKind::None &&
            static_cast<int>(si.vars.size()) <= st.l) {
            for (const auto& target : si.targets) {
                int m =
                    static_cast<int>(st.subsets[static_cast<size_t>(target.id)].vars.size());
                const auto& lst = st.cs.extensions(m, target.positions, c);
                bool found = false;
                for (int idx : lst)
                    if (st.alive[static_cast<size_t>(target.id)][static_cast<size_t>(idx)]) {
                        found = true;
                        break;
                    }
                if (!found) {
                    cause =
                        GameState::Cause{GameState::CauseKind::Extension, target.id, -1, seq};
                    break;
                }
            }
        }
        if (cause.kind == GameState::CauseKind::None) continue;

        st.alive[static_cast<size_t>(wi)][static_cast<size_t>(c)] = 0;
        st.causes[static_cast<size_t>(wi)][static_cast<size_t>(c)] = cause;
        ++seq;

        auto enqueue = [&](int s, int cc) {
            if (st.alive[static_cast<size_t>(s)][static_cast<size_t>(cc)] &&
                !queued[static_cast<size_t>(s)][static_cast<size_t>(cc)]) {
                queued[static_cast<size_t>(s)][static_cast<size_t>(cc)] = 1;
                queue.emplace_back(s, cc);
            }
        };
        // Supersets may lose their restriction support.
        for (int sup : si.immediate_supersets) {
            const SubsetInfo& ssi = st.subsets[static_cast<size_t>(sup)];
            int m = static_cast<int>(ssi.vars.size());
            auto pos = positions_within(si.vars, ssi.vars);
            for (int idx : st.cs.extensions(m, pos, c)) enqueue(sup, idx);
        }
        // Small subsets may lose an extension witness.
        for (const auto& [sub_id, table] : si.small_subsets)
            enqueue(sub_id, (*table)[static_cast<size_t>(c)]);
    }
}

SpoilerLine extract_line(const GameState& st) {
    SpoilerLine line;
    std::map<std::pair<int, int>, int> move_of;  // position -> move index

    auto rec = [&](auto&& self, int wi, int c) -> int {
        auto key = std::make_pair(wi, c);
        auto it = move_of.find(key);
        if (it != move_of.end()) return it->second;
        const GameState::Cause& cause =
            st.causes[static_cast<size_t>(wi)][static_cast<size_t>(c)];
        if (cause.kind != GameState::CauseKind::Extension)
            throw std::logic_error("line extraction expects an extension death");
        int my_index = static_cast<int>(line.moves.size());
        move_of[key] = my_index;
        {
            SpoilerLine::Move mv;
            mv.domain_vars = st.subsets[static_cast<size_t>(wi)].vars;
            mv.domain_class = st.cs.at(static_cast<int>(mv.domain_vars.size()), c);
            mv.placed_vars = st.subsets[static_cast<size_t>(cause.target_subset)].vars;
            line.moves.push_back(std::move(mv));
        }

        const SubsetInfo& target = st.subsets[static_cast<size_t>(cause.target_subset)];
        int tm = static_cast<int>(target.vars.size());
        auto pos = positions_within(st.subsets[static_cast<size_t>(wi)].vars, target.vars);
        std::vector<SpoilerLine::Option> options;
        for (int idx : st.cs.extensions(tm, pos, c)) {
            SpoilerLine::Option opt;
            opt.response = st.cs.at(tm, idx);
            const GameState::Cause& oc =
                st.causes[static_cast<size_t>(cause.target_subset)][static_cast<size_t>(idx)];
            if (oc.kind == GameState::CauseKind::Fact) {
                // Name the first violated instance fact.
                for (const auto& [sym, positions] : target.facts)
                    if (!st.cs.fact_holds(sym, tm, positions, idx)) {
                        opt.violated_sym = sym;
                        for (int p : positions)
                            opt.violated_fact.push_back(target.vars[static_cast<size_t>(p)]);
                        break;
                    }
            } else {
                // Chase restriction deaths down to an extension death.
                int cw = cause.target_subset;
                int cc = idx;
                while (st.causes[static_cast<size_t>(cw)][static_cast<size_t>(cc)].kind ==
                       GameState::CauseKind::Restriction) {
                    const auto& rc = st.causes[static_cast<size_t>(cw)][static_cast<size_t>(cc)];
                    cc = rc.target_class;
                    cw = rc.target_subset;
                }
                opt.next_move = self(self, cw, cc);
            }
            options.push_back(std::move(opt));
        }
        line.moves[static_cast<size_t>(my_index)].options = std::move(options);
        return my_index;
    };

    int empty_id = st.subset_id.at(std::vector<int>{});
    rec(rec, empty_id, 0);

    std::vector<int> depth(line.moves.size(), -1);
    auto depth_of = [&](auto&& self, int i) -> int {
        if (depth[static_cast<size_t>(i)] >= 0) return depth[static_cast<size_t>(i)];
        int best = 0;
        for (const auto& opt : line.moves[static_cast<size_t>(i)].options)
            if (opt.next_move >= 0) best = std::max(best, self(self, opt.next_move));
        depth[static_cast<size_t>(i)] = 1 + best;
        return 1 + best;
    };
    line.depth = depth_of(depth_of, 0);
    return line;
}

}  // namespace

bool StrategyFamily::contains(const std::vector<int>& vars, const AssignmentClass& c) const {
    for (const auto& [v, cc] : members)
        if (v == vars && cc == c) return true;
    return false;
}

PebbleResult duplicator_wins(const Structure& instance, const ClassSystem& cs, int l, int k) {
    GameState st = build_state(instance, cs, l, k);
    run_fixpoint(st);
    PebbleResult res;
    int empty_id = st.subset_id.at(std::vector<int>{});
    res.wins = st.alive[static_cast<size_t>(empty_id)][0] != 0;
    if (res.wins) {
        StrategyFamily fam;
        fam.l = l;
        fam.k = k;
        for (size_t i = 0; i < st.subsets.size(); ++i) {
            int m = static_cast<int>(st.subsets[i].vars.size());
            for (size_t c = 0; c < st.alive[i].size(); ++c)
                if (st.alive[i][c])
                    fam.members.emplace_back(st.subsets[i].vars, cs.at(m, static_cast<int>(c)));
        }
        std::sort(fam.members.begin(), fam.members.end());
        res.strategy = std::move(fam);
    } else {
        res.line = extract_line(st);
    }
    return res;
}

PebbleResult duplicator_wins(const Structure& instance, const TemplateHandle& t, int l, int k,
                             int cap) {
    ClassSystem cs(t, std::max(cap, k));
    return duplicator_wins(instance, cs, l, k);
}

bool verify_strategy(const StrategyFamily& f, const Structure& instance, const ClassSystem& cs) {
    const TemplateHandle& t = cs.tmpl();
    if (instance.sig != t.sig) return false;
    if (f.members.empty()) return false;

    std::map<std::vector<int>, std::set<AssignmentClass>> by_domain;
    for (const auto& [vars, c] : f.members) {
        if (static_cast<int>(vars.size()) > f.k) return false;
        if (!std::is_sorted(vars.begin(), vars.end())) return false;
        by_domain[vars].insert(c);
    }
    if (!by_domain.count({})) return false;

    // Partial-homomorphism condition.
    for (const auto& [vars, cls] : by_domain) {
        std::vector<std::pair<int, std::vector<int>>> facts;
        collect_facts(instance, vars, facts);
        for (const auto& c : cls)
            for (const auto& [sym, positions] : facts)
                if (!class_holds(t, sym, restrict_class(c, positions))) return false;
    }

    // Closure under restriction (all sub-domains).
    for (const auto& [vars, cls] : by_domain) {
        std::vector<std::vector<int>> subs;
        std::vector<int> cur;
        auto rec = [&](auto&& self, size_t start) -> void {
            subs.push_back(cur);
            for (size_t i = start; i < vars.size(); ++i) {
                cur.push_back(vars[i]);
                self(self, i + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        for (const auto& sub : subs) {
            if (sub == vars) continue;
            auto pos = positions_within(sub, vars);
            auto it = by_domain.find(sub);
            for (const auto& c : cls)
                if (it == by_domain.end() || !it->second.count(restrict_class(c, pos)))
                    return false;
        }
    }

    // (l,k)-extension.
    int n = static_cast<int>(instance.domain.size());
    for (const auto& [vars, cls] : by_domain) {
        if (static_cast<int>(vars.size()) > f.l) continue;
        std::vector<int> others;
        for (int v = 0; v < n; ++v)
            if (!std::binary_search(vars.begin(), vars.end(), v)) others.push_back(v);
        std::vector<std::vector<int>> exts;
        std::vector<int> cur;
        auto rec = [&](auto&& self, size_t start) -> void {
            if (!cur.empty()) exts.push_back(cur);
            if (vars.size() + cur.size() == static_cast<size_t>(f.k)) return;
            for (size_t i = start; i < others.size(); ++i) {
                cur.push_back(others[i]);
                self(self, i + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        for (const auto& add : exts) {
            std::vector<int> big = vars;
            big.insert(big.end(), add.begin(), add.end());
            std::sort(big.begin(), big.end());
            auto pos = positions_within(vars, big);
            auto it = by_domain.find(big);
            for (const auto& c : cls) {
                bool found = false;
                if (it != by_domain.end())
                    for (const auto& cb : it->second)
                        if (restrict_class(cb, pos) == c) {
                            found = true;
                            break;
                        }
                if (!found) return false;
            }
        }
    }
    return true;
}

bool verify_strategy(const StrategyFamily& f, const Structure& instance,
                     const TemplateHandle& t) {
    ClassSystem cs(t, std::max(kDefaultClassCap, f.k));
    return verify_strategy(f, instance, cs);
}

bool replay_spoiler_line(const SpoilerLine& line, const Structure& instance,
                         const ClassSystem& cs, int l, int k) {
    if (line.moves.empty()) throw ParseError("empty spoiler line");
    if (!line.moves[0].domain_vars.empty())
        throw ParseError("root move must have an empty domain");

    int n = static_cast<int>(instance.domain.size());
    std::vector<int> state(line.moves.size(), 0);  // 0 new, 1 open, 2 done
    auto visit = [&](auto&& self, int mi) -> bool {
        if (state[static_cast<size_t>(mi)] == 1) return false;  // cycle
        if (state[static_cast<size_t>(mi)] == 2) return true;
        state[static_cast<size_t>(mi)] = 1;
        const SpoilerLine::Move& mv = line.moves[static_cast<size_t>(mi)];

        if (static_cast<int>(mv.domain_vars.size()) > l) return false;
        if (static_cast<int>(mv.placed_vars.size()) > k) return false;
        if (!std::is_sorted(mv.domain_vars.begin(), mv.domain_vars.end()) ||
            !std::is_sorted(mv.placed_vars.begin(), mv.placed_vars.end()))
            return false;
        if (!std::includes(mv.placed_vars.begin(), mv.placed_vars.end(),
                           mv.domain_vars.begin(), mv.domain_vars.end()))
            return false;
        if (mv.placed_vars.size() <= mv.domain_vars.size()) return false;
        for (int v : mv.placed_vars)
            if (v < 0 || v >= n) return false;

        int pm = static_cast<int>(mv.placed_vars.size());
        if (mv.domain_class.arity != static_cast<int>(mv.domain_vars.size())) return false;
        int dom_idx = cs.index_of(mv.domain_class);
        if (dom_idx < 0) return false;

        auto pos = positions_within(mv.domain_vars, mv.placed_vars);
        std::set<int> required;
        for (int idx : cs.extensions(pm, pos, dom_idx)) required.insert(idx);
        std::set<int> covered;
        std::vector<std::pair<int, std::vector<int>>> facts;
        collect_facts(instance, mv.placed_vars, facts);

        for (const auto& opt : mv.options) {
            int idx = cs.index_of(opt.response);
            if (idx < 0 || !required.count(idx)) return false;
            if (!covered.insert(idx).second) return false;  // duplicate option
            if (opt.violated_sym >= 0) {
                if (opt.violated_sym >= static_cast<int>(instance.sig.size())) return false;
                if (static_cast<int>(opt.violated_fact.size()) !=
                    instance.sig.arity(opt.violated_sym))
                    return false;
                if (!instance.has_fact(opt.violated_sym, opt.violated_fact)) return false;
                std::vector<int> fact_pos;
                for (int v : opt.violated_fact) {
                    auto it =
                        std::lower_bound(mv.placed_vars.begin(), mv.placed_vars.end(), v);
                    if (it == mv.placed_vars.end() || *it != v) return false;
                    fact_pos.push_back(static_cast<int>(it - mv.placed_vars.begin()));
                }
                if (cs.fact_holds(opt.violated_sym, pm, fact_pos, idx)) return false;
            } else if (opt.next_move >= 0) {
                if (opt.next_move >= static_cast<int>(line.moves.size())) return false;
                const SpoilerLine::Move& next =
                    line.moves[static_cast<size_t>(opt.next_move)];
                if (!std::includes(mv.placed_vars.begin(), mv.placed_vars.end(),
                                   next.domain_vars.begin(), next.domain_vars.end()))
                    return false;
                auto next_pos = positions_within(next.domain_vars, mv.placed_vars);
                if (!(restrict_class(opt.response, next_pos) == next.domain_class))
                    return false;
                if (!self(self, opt.next_move)) return false;
            } else {
                return false;  // unrefuted option
            }
        }
        if (covered.size() != required.size()) return false;
        state[static_cast<size_t>(mi)] = 2;
        return true;
    };
    return visit(visit, 0);
}

bool replay_spoiler_line(const SpoilerLine& line, const Structure& instance,
                         const TemplateHandle& t, int l, int k) {
    ClassSystem cs(t, std::max(kDefaultClassCap, k));
    return replay_spoiler_line(line, instance, cs, l, k);
}

}  // namespace csplab
