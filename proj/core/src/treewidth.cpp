#include "csplab/treewidth.hpp"

#include <algorithm>
#include <map>

namespace csplab {

namespace {

using Mask = uint32_t;

int popcount(Mask m) { return __builtin_popcount(m); }

std::vector<int> mask_to_vec(Mask m) {
    std::vector<int> v;
    for (int i = 0; m; ++i, m >>= 1)
        if (m & 1) v.push_back(i);
    return v;
}

struct DecompSearch {
    int n, l, k;
    std::vector<Mask> adj;
    // (component, separator) -> chosen bag, or 0 when unsolvable.
    std::map<std::pair<Mask, Mask>, Mask> memo;

    Mask neighbors(Mask set) const {
        Mask nb = 0;
        for (int v = 0; v < n; ++v)
            if (set & (Mask{1} << v)) nb |= adj[static_cast<size_t>(v)];
        return nb & ~set;
    }

    std::vector<Mask> components(Mask set) const {
        std::vector<Mask> comps;
        Mask left = set;
        while (left) {
            int v = __builtin_ctz(left);
            Mask comp = Mask{1} << v;
            while (true) {
                Mask grow = (neighbors(comp) & set) | comp;
                if (grow == comp) break;
                comp = grow;
            }
            comps.push_back(comp);
            left &= ~comp;
        }
        return comps;
    }

    /// Is there a subtree covering `comp` hanging off a bag that contains
    /// `sep` (all outside-neighbours of comp lie in sep, |sep| <= l)?
    bool solve(Mask comp, Mask sep) {
        auto key = std::make_pair(comp, sep);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second != 0;
        memo[key] = 0;  // pessimistic during recursion; overwritten on success

        // Candidate bags: sep plus a nonempty subset of comp, at most k
        // total. Larger bags first so cliques land in one bag.
        std::vector<int> cvars = mask_to_vec(comp);
        int room = k - popcount(sep);
        if (room <= 0) return false;
        std::vector<Mask> picks;
        for (Mask pick = 1; pick < (Mask{1} << cvars.size()); ++pick)
            if (popcount(pick) <= room) picks.push_back(pick);
        std::stable_sort(picks.begin(), picks.end(),
                         [](Mask a, Mask b) { return popcount(a) > popcount(b); });
        for (Mask pick : picks) {
            Mask bag = sep;
            for (size_t i = 0; i < cvars.size(); ++i)
                if (pick & (Mask{1} << i)) bag |= Mask{1} << cvars[i];
            bool ok = true;
            for (Mask sub : components(comp & ~bag)) {
                Mask sub_sep = neighbors(sub) & bag;
                if (popcount(sub_sep) > l || !solve(sub, sub_sep)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                memo[key] = bag;
                return true;
            }
        }
        return false;
    }

    /// Reconstructs bags from the memo, parenting the subtree for (comp,
    /// sep) under `parent_bag`.
    void emit(Mask comp, Mask sep, int parent_bag, TreeDecomposition& d) {
        Mask bag = memo.at({comp, sep});
        d.bags.push_back(mask_to_vec(bag));
        d.parent.push_back(parent_bag);
        int me = static_cast<int>(d.bags.size()) - 1;
        for (Mask sub : components(comp & ~bag)) emit(sub, neighbors(sub) & bag, me, d);
    }
};

}  // namespace

std::optional<TreeDecomposition> find_decomposition(const Structure& s, int l, int k, int cap) {
    int n = static_cast<int>(s.domain.size());
    if (n > cap) throw BudgetError("decomposition search cap exceeded");
    if (!(0 <= l && l < k)) throw std::invalid_argument("need 0 <= l < k");

    TreeDecomposition d;
    d.l = l;
    d.k = k;
    if (n == 0) {
        d.bags.push_back({});
        d.parent.push_back(-1);
        return d;
    }

    DecompSearch search;
    search.n = n;
    search.l = l;
    search.k = k;
    search.adj.assign(static_cast<size_t>(n), 0);
    auto adj_sets = gaifman_adjacency(s);
    for (int v = 0; v < n; ++v)
        for (int w : adj_sets[static_cast<size_t>(v)])
            search.adj[static_cast<size_t>(v)] |= Mask{1} << w;

    Mask everything = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
    for (Mask comp : search.components(everything))
        if (!search.solve(comp, 0)) return std::nullopt;

    // Emit one subtree per connected component; later roots attach to the
    // first root (empty intersections are always within the l budget).
    int global_root = -1;
    for (Mask comp : search.components(everything)) {
        int before = static_cast<int>(d.bags.size());
        search.emit(comp, 0, global_root, d);
        if (global_root < 0) global_root = before;
    }
    return d;
}

bool verify_decomposition(const TreeDecomposition& d, const Structure& s) {
    int n = static_cast<int>(s.domain.size());
    size_t b = d.bags.size();
    if (b == 0 || d.parent.size() != b) return false;

    // Tree shape: exactly one root, parents point backwards (acyclic).
    int roots = 0;
    for (size_t i = 0; i < b; ++i) {
        if (d.parent[i] < 0) {
            ++roots;
        } else {
            if (d.parent[i] >= static_cast<int>(b)) return false;
            // Walk to the root, bounded by the bag count.
            int cur = static_cast<int>(i);
            size_t steps = 0;
            while (d.parent[static_cast<size_t>(cur)] >= 0) {
                cur = d.parent[static_cast<size_t>(cur)];
                if (++steps > b) return false;  // cycle
            }
        }
    }
    if (roots != 1) return false;

    // Bag contents, sizes, and adjacent intersections.
    for (size_t i = 0; i < b; ++i) {
        if (!std::is_sorted(d.bags[i].begin(), d.bags[i].end())) return false;
        for (int v : d.bags[i])
            if (v < 0 || v >= n) return false;
        if (std::adjacent_find(d.bags[i].begin(), d.bags[i].end()) != d.bags[i].end())
            return false;
        if (static_cast<int>(d.bags[i].size()) > d.k) return false;
        if (d.parent[i] >= 0) {
            std::vector<int> inter;
            const auto& p = d.bags[static_cast<size_t>(d.parent[i])];
            std::set_intersection(d.bags[i].begin(), d.bags[i].end(), p.begin(), p.end(),
                                  std::back_inserter(inter));
            if (static_cast<int>(inter.size()) > d.l) return false;
        }
    }

    // Edge coverage.
    auto adj = gaifman_adjacency(s);
    for (int v = 0; v < n; ++v)
        for (int w : adj[static_cast<size_t>(v)]) {
            if (w < v) continue;
            bool covered = false;
            for (const auto& bag : d.bags)
                if (std::binary_search(bag.begin(), bag.end(), v) &&
                    std::binary_search(bag.begin(), bag.end(), w)) {
                    covered = true;
                    break;
                }
            if (!covered) return false;
        }

    // Every element appears somewhere and its bags form a connected subtree.
    for (int v = 0; v < n; ++v) {
        std::vector<int> holders;
        for (size_t i = 0; i < b; ++i)
            if (std::binary_search(d.bags[i].begin(), d.bags[i].end(), v))
                holders.push_back(static_cast<int>(i));
        if (holders.empty()) return false;
        // Connectivity in the tree restricted to holder bags: from each
        // holder, stepping to the parent must reach another holder without
        // leaving... equivalently: all holders must reach the holder closest
        // to the root through holder-only parent chains.
        std::set<int> holder_set(holders.begin(), holders.end());
        int root_holder = -1;
        for (int h : holders) {
            int p = d.parent[static_cast<size_t>(h)];
            if (p < 0 || !holder_set.count(p)) {
                if (root_holder >= 0) return false;  // two disconnected pieces
                root_holder = h;
            }
        }
        if (root_holder < 0) return false;
    }
    return true;
}

std::string to_text(const TreeDecomposition& d, const Structure& s) {
    std::string out;
    auto rec = [&](auto&& self, int bag, int depth) -> void {
        out.append(static_cast<size_t>(depth) * 2, ' ');
        out += '{';
        for (size_t i = 0; i < d.bags[static_cast<size_t>(bag)].size(); ++i) {
            if (i) out += ',';
            out += s.domain[static_cast<size_t>(d.bags[static_cast<size_t>(bag)][i])];
        }
        out += "}\n";
        for (size_t i = 0; i < d.bags.size(); ++i)
            if (d.parent[i] == bag) self(self, static_cast<int>(i), depth + 1);
    };
    for (size_t i = 0; i < d.bags.size(); ++i)
        if (d.parent[i] < 0) rec(rec, static_cast<int>(i), 0);
    return out;
}

}  // namespace csplab
