#include "csplab/homomorphism.hpp"

#include <algorithm>

namespace csplab {

namespace {

/// Facts grouped by the largest element index they mention, so a fact is
/// checked as soon as its last entry gets assigned.
struct FactSchedule {
    // (symbol, tuple) pairs, per trigger element.
    std::vector<std::vector<std::pair<int, const Tuple*>>> by_trigger;
    std::vector<std::pair<int, Tuple>> nullary;  // arity-0 facts

    explicit FactSchedule(const Structure& a) : by_trigger(a.domain.size()) {
        for (size_t sym = 0; sym < a.relations.size(); ++sym)
            for (const auto& t : a.relations[sym]) {
                if (t.empty()) {
                    nullary.emplace_back(static_cast<int>(sym), t);
                    continue;
                }
                int trig = *std::max_element(t.begin(), t.end());
                by_trigger[static_cast<size_t>(trig)].emplace_back(static_cast<int>(sym), &t);
            }
    }
};

bool image_fact_holds(const Structure& b, int sym, const Tuple& src, const HomMap& map) {
    Tuple img(src.size());
    for (size_t i = 0; i < src.size(); ++i) img[i] = map[static_cast<size_t>(src[i])];
    return b.has_fact(sym, img);
}

/// Shared backtracking driver. `allowed`, when non-null, restricts candidate
/// values per element; `emit` returns false to stop the search.
template <typename Emit>
void search_homomorphisms(const Structure& a, const Structure& b,
                          const std::vector<std::vector<int>>* allowed, Emit&& emit) {
    if (a.sig != b.sig) throw std::invalid_argument("homomorphism: signature mismatch");
    FactSchedule sched(a);
    for (const auto& [sym, t] : sched.nullary)
        if (!b.has_fact(sym, t)) return;  // 0-ary fact absent in target

    size_t n = a.domain.size();
    HomMap map(n, -1);
    if (n == 0) {
        emit(map);
        return;
    }

    std::vector<int> choice(n, -1);
    size_t pos = 0;
    while (true) {
        int next = choice[pos] + 1;
        int limit = allowed ? static_cast<int>((*allowed)[pos].size())
                            : static_cast<int>(b.domain.size());
        bool advanced = false;
        for (int c = next; c < limit; ++c) {
            int value = allowed ? (*allowed)[pos][static_cast<size_t>(c)] : c;
            map[pos] = value;
            bool ok = true;
            for (const auto& [sym, t] : sched.by_trigger[pos])
                if (!image_fact_holds(b, sym, *t, map)) {
                    ok = false;
                    break;
                }
            if (ok) {
                choice[pos] = c;
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            map[pos] = -1;
            choice[pos] = -1;
            if (pos == 0) return;
            --pos;
            continue;
        }
        if (pos + 1 == n) {
            if (!emit(map)) return;
            // keep map[pos] assigned; loop continues with next candidate
        } else {
            ++pos;
        }
    }
}

}  // namespace

bool is_partial_homomorphism(const Structure& a, const Structure& b, const HomMap& map) {
    if (a.sig != b.sig) return false;
    for (size_t sym = 0; sym < a.relations.size(); ++sym)
        for (const auto& t : a.relations[sym]) {
            Tuple img(t.size());
            bool total = true;
            for (size_t i = 0; i < t.size(); ++i) {
                int m = map[static_cast<size_t>(t[i])];
                if (m < 0) {
                    total = false;
                    break;
                }
                img[i] = m;
            }
            if (total && !b.has_fact(static_cast<int>(sym), img)) return false;
        }
    return true;
}

bool is_homomorphism(const Structure& a, const Structure& b, const HomMap& map) {
    if (map.size() != a.domain.size()) return false;
    for (int m : map)
        if (m < 0 || static_cast<size_t>(m) >= b.domain.size()) return false;
    return is_partial_homomorphism(a, b, map);
}

std::optional<HomMap> find_homomorphism(const Structure& a, const Structure& b) {
    std::optional<HomMap> found;
    search_homomorphisms(a, b, nullptr, [&](const HomMap& m) {
        found = m;
        return false;
    });
    return found;
}

std::vector<HomMap> enumerate_homomorphisms(const Structure& a, const Structure& b,
                                            size_t limit) {
    std::vector<HomMap> out;
    if (limit == 0) return out;
    search_homomorphisms(a, b, nullptr, [&](const HomMap& m) {
        out.push_back(m);
        return out.size() < limit;
    });
    return out;
}

bool hom_equivalent(const Structure& a, const Structure& b) {
    return find_homomorphism(a, b).has_value() && find_homomorphism(b, a).has_value();
}

Structure induced_substructure(const Structure& s, const std::vector<int>& elements) {
    Structure out(s.sig);
    std::vector<int> remap(s.domain.size(), -1);
    for (int e : elements) {
        remap[static_cast<size_t>(e)] = static_cast<int>(out.domain.size());
        out.domain.push_back(s.domain[static_cast<size_t>(e)]);
    }
    for (size_t sym = 0; sym < s.relations.size(); ++sym)
        for (const auto& t : s.relations[sym]) {
            Tuple m(t.size());
            bool inside = true;
            for (size_t i = 0; i < t.size(); ++i) {
                m[i] = remap[static_cast<size_t>(t[i])];
                if (m[i] < 0) {
                    inside = false;
                    break;
                }
            }
            if (inside) out.relations[sym].insert(std::move(m));
        }
    return out;
}

namespace {

/// Does s retract onto the induced substructure on `subset`? A retraction is
/// an endomorphism fixing `subset` pointwise with image inside it.
bool has_retraction(const Structure& s, const std::vector<int>& subset) {
    std::vector<char> in_subset(s.domain.size(), 0);
    for (int e : subset) in_subset[static_cast<size_t>(e)] = 1;
    std::vector<std::vector<int>> allowed(s.domain.size());
    for (size_t v = 0; v < s.domain.size(); ++v) {
        if (in_subset[v])
            allowed[v] = {static_cast<int>(v)};
        else
            allowed[v] = subset;
    }
    bool found = false;
    search_homomorphisms(s, s, &allowed, [&](const HomMap&) {
        found = true;
        return false;
    });
    return found;
}

bool next_combination(std::vector<int>& idx, int n) {
    int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[static_cast<size_t>(i)] < n - (k - i)) {
            ++idx[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

Structure compute_core(const Structure& s) {
    int n = static_cast<int>(s.domain.size());
    if (n == 0) return s;
    for (int k = 1; k <= n; ++k) {
        std::vector<int> subset(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) subset[static_cast<size_t>(i)] = i;
        do {
            if (has_retraction(s, subset)) return induced_substructure(s, subset);
        } while (next_combination(subset, n));
    }
    return s;  // unreachable: the full subset always retracts
}

}  // namespace csplab
