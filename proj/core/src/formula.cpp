#include "csplab/formula.hpp"

#include <algorithm>
#include <sstream>

namespace csplab {

namespace {

/// Free pool ids of a node (bound ids of enclosing Exists nodes removed by
/// the caller's recursion).
void free_vars(const LkNode& n, std::set<int>& out) {
    switch (n.kind) {
        case LkNode::Kind::True:
            break;
        case LkNode::Kind::Atom:
            out.insert(n.vars.begin(), n.vars.end());
            break;
        case LkNode::Kind::And:
            for (const auto& c : n.children) free_vars(c, out);
            break;
        case LkNode::Kind::Exists: {
            std::set<int> inner;
            free_vars(n.children[0], inner);
            for (int b : n.bound) inner.erase(b);
            out.insert(inner.begin(), inner.end());
            break;
        }
    }
}

bool quantifier_free(const LkNode& n) {
    if (n.kind == LkNode::Kind::Exists) return false;
    for (const auto& c : n.children)
        if (!quantifier_free(c)) return false;
    return true;
}

struct Translator {
    const Structure& s;
    const TreeDecomposition& d;
    int k;
    std::vector<std::vector<int>> children;  // bag tree

    /// Formula for the subtree rooted at `bag`, given pool assignments for
    /// exactly the bag's elements.
    LkNode subtree(int bag, const std::map<int, int>& pool_of) {
        LkNode conj;
        conj.kind = LkNode::Kind::And;
        const auto& elems = d.bags[static_cast<size_t>(bag)];

        // Atoms of the substructure induced by the bag.
        for (size_t sym = 0; sym < s.relations.size(); ++sym)
            for (const auto& t : s.relations[sym]) {
                bool inside = true;
                for (int e : t)
                    if (!std::binary_search(elems.begin(), elems.end(), e)) {
                        inside = false;
                        break;
                    }
                if (!inside) continue;
                LkNode atom;
                atom.kind = LkNode::Kind::Atom;
                atom.symbol = static_cast<int>(sym);
                for (int e : t) atom.vars.push_back(pool_of.at(e));
                conj.children.push_back(std::move(atom));
            }

        // One existentially quantified subformula per child bag; the shared
        // elements keep their pool ids, fresh elements reuse ids not taken
        // by the shared ones.
        for (int child : children[static_cast<size_t>(bag)]) {
            const auto& celems = d.bags[static_cast<size_t>(child)];
            std::map<int, int> child_pool;
            std::vector<char> taken(static_cast<size_t>(k), 0);
            for (int e : celems)
                if (pool_of.count(e)) {
                    child_pool[e] = pool_of.at(e);
                    taken[static_cast<size_t>(pool_of.at(e))] = 1;
                }
            LkNode ex;
            ex.kind = LkNode::Kind::Exists;
            for (int e : celems) {
                if (child_pool.count(e)) continue;
                int id = 0;
                while (taken[static_cast<size_t>(id)]) ++id;
                taken[static_cast<size_t>(id)] = 1;
                child_pool[e] = id;
                ex.bound.push_back(id);
            }
            LkNode sub = subtree(child, child_pool);
            if (ex.bound.empty()) {
                conj.children.push_back(std::move(sub));
            } else {
                ex.children.push_back(std::move(sub));
                conj.children.push_back(std::move(ex));
            }
        }

        if (conj.children.empty()) {
            LkNode t;
            t.kind = LkNode::Kind::True;
            return t;
        }
        if (conj.children.size() == 1) return std::move(conj.children[0]);
        return conj;
    }
};

}  // namespace

LkFormula canonical_query_lk(const Structure& s, const TreeDecomposition& d) {
    if (!verify_decomposition(d, s))
        throw std::invalid_argument("canonical_query_lk: invalid decomposition");
    LkFormula f;
    f.l = d.l;
    f.k = d.k;
    f.sig = s.sig;

    Translator tr{s, d, d.k, {}};
    tr.children.resize(d.bags.size());
    int root = -1;
    for (size_t i = 0; i < d.bags.size(); ++i) {
        if (d.parent[i] < 0)
            root = static_cast<int>(i);
        else
            tr.children[static_cast<size_t>(d.parent[i])].push_back(static_cast<int>(i));
    }

    std::map<int, int> pool_of;
    LkNode top;
    top.kind = LkNode::Kind::Exists;
    for (size_t i = 0; i < d.bags[static_cast<size_t>(root)].size(); ++i) {
        pool_of[d.bags[static_cast<size_t>(root)][i]] = static_cast<int>(i);
        top.bound.push_back(static_cast<int>(i));
    }
    LkNode body = tr.subtree(root, pool_of);
    if (top.bound.empty()) {
        f.root = std::move(body);
    } else {
        top.children.push_back(std::move(body));
        f.root = std::move(top);
    }
    return f;
}

namespace {

bool eval_node(const LkNode& n, const Structure& b, std::vector<int>& env) {
    switch (n.kind) {
        case LkNode::Kind::True:
            return true;
        case LkNode::Kind::Atom: {
            Tuple t(n.vars.size());
            for (size_t i = 0; i < n.vars.size(); ++i) {
                int v = env[static_cast<size_t>(n.vars[i])];
                if (v < 0) throw std::logic_error("unbound variable in formula evaluation");
                t[i] = v;
            }
            return b.has_fact(n.symbol, t);
        }
        case LkNode::Kind::And:
            for (const auto& c : n.children)
                if (!eval_node(c, b, env)) return false;
            return true;
        case LkNode::Kind::Exists: {
            std::vector<int> saved;
            saved.reserve(n.bound.size());
            for (int id : n.bound) saved.push_back(env[static_cast<size_t>(id)]);
            size_t count = n.bound.size();
            bool found = false;
            std::vector<int> pick(count, 0);
            if (b.domain.empty()) {
                found = false;
            } else {
                while (true) {
                    for (size_t i = 0; i < count; ++i)
                        env[static_cast<size_t>(n.bound[i])] = pick[i];
                    if (eval_node(n.children[0], b, env)) {
                        found = true;
                        break;
                    }
                    size_t i = 0;
                    while (i < count &&
                           pick[i] + 1 == static_cast<int>(b.domain.size())) {
                        pick[i] = 0;
                        ++i;
                    }
                    if (i == count) break;
                    ++pick[i];
                }
            }
            for (size_t i = 0; i < count; ++i)
                env[static_cast<size_t>(n.bound[i])] = saved[i];
            return found;
        }
    }
    return false;
}

}  // namespace

bool evaluate_formula(const LkFormula& f, const Structure& b) {
    if (b.sig != f.sig) throw std::invalid_argument("formula signature mismatch");
    std::vector<int> env(static_cast<size_t>(std::max(f.k, 1)), -1);
    return eval_node(f.root, b, env);
}

bool lk_formula_valid(const LkFormula& f) {
    // Distinct pool ids within the budget k.
    std::set<int> ids;
    auto collect = [&](auto&& self, const LkNode& n) -> void {
        ids.insert(n.vars.begin(), n.vars.end());
        ids.insert(n.bound.begin(), n.bound.end());
        for (const auto& c : n.children) self(self, c);
    };
    collect(collect, f.root);
    if (!ids.empty() && (*ids.rbegin() >= f.k || *ids.begin() < 0)) return false;
    if (static_cast<int>(ids.size()) > f.k) return false;

    // No free variables at the top.
    std::set<int> fv;
    free_vars(f.root, fv);
    if (!fv.empty()) return false;

    // l-bounded conjunctions.
    bool ok = true;
    auto walk = [&](auto&& self, const LkNode& n) -> void {
        if (!ok) return;
        if (n.kind == LkNode::Kind::And) {
            for (const auto& c : n.children) {
                if (quantifier_free(c)) continue;
                std::set<int> cfv;
                free_vars(c, cfv);
                if (static_cast<int>(cfv.size()) > f.l) {
                    ok = false;
                    return;
                }
            }
        }
        for (const auto& c : n.children) self(self, c);
    };
    walk(walk, f.root);
    return ok;
}

namespace {

void node_text(const LkNode& n, const Signature& sig, std::string& out) {
    switch (n.kind) {
        case LkNode::Kind::True:
            out += "true";
            break;
        case LkNode::Kind::Atom:
            out += sig.name(n.symbol);
            out += '(';
            for (size_t i = 0; i < n.vars.size(); ++i) {
                if (i) out += ',';
                out += 'x' + std::to_string(n.vars[i] + 1);
            }
            out += ')';
            break;
        case LkNode::Kind::And:
            out += '(';
            for (size_t i = 0; i < n.children.size(); ++i) {
                if (i) out += " & ";
                node_text(n.children[i], sig, out);
            }
            out += ')';
            break;
        case LkNode::Kind::Exists:
            out += "exists";
            for (int b : n.bound) {
                out += " x" + std::to_string(b + 1);
            }
            out += ". ";
            node_text(n.children[0], sig, out);
            break;
    }
}

}  // namespace

std::string to_text(const LkFormula& f) {
    std::string out;
    node_text(f.root, f.sig, out);
    return out;
}

}  // namespace csplab
