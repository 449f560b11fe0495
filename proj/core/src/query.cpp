#include "csplab/query.hpp"

#include <algorithm>
#include <sstream>

namespace csplab {

TaggedQuery canonical_query(const Structure& s) {
    TaggedQuery q;
    q.variables.reserve(s.domain.size());
    for (const auto& e : s.domain) q.variables.push_back("v_" + e);
    for (size_t sym = 0; sym < s.relations.size(); ++sym)
        for (const auto& t : s.relations[sym]) {
            std::vector<std::string> args;
            args.reserve(t.size());
            for (int e : t) args.push_back(q.variables[static_cast<size_t>(e)]);
            q.atoms.emplace_back(s.sig.name(static_cast<int>(sym)), std::move(args));
        }
    return q;
}

bool query_satisfied(const TaggedQuery& q, const Structure& target,
                     const std::vector<int>& free_values) {
    if (free_values.size() != q.free.size())
        throw std::invalid_argument("query_satisfied: wrong number of free values");

    std::vector<int> var_index;  // variable name -> slot
    auto slot_of = [&](const std::string& name) {
        for (size_t i = 0; i < q.variables.size(); ++i)
            if (q.variables[i] == name) return static_cast<int>(i);
        throw std::invalid_argument("query uses undeclared variable " + name);
    };

    std::vector<int> assign(q.variables.size(), -1);
    std::vector<char> fixed(q.variables.size(), 0);
    for (size_t i = 0; i < q.free.size(); ++i) {
        int s = slot_of(q.free[i]);
        assign[static_cast<size_t>(s)] = free_values[i];
        fixed[static_cast<size_t>(s)] = 1;
    }

    // Resolve atom argument slots and symbols once.
    struct ResolvedAtom {
        int sym;
        std::vector<int> slots;
    };
    std::vector<ResolvedAtom> atoms;
    for (const auto& [name, args] : q.atoms) {
        int sym = target.sig.index_of(name);
        if (sym < 0) throw std::invalid_argument("query symbol not in signature: " + name);
        if (static_cast<int>(args.size()) != target.sig.arity(sym))
            throw std::invalid_argument("query atom arity mismatch for " + name);
        ResolvedAtom ra;
        ra.sym = sym;
        for (const auto& a : args) ra.slots.push_back(slot_of(a));
        atoms.push_back(std::move(ra));
    }

    auto atoms_ok = [&]() {
        for (const auto& ra : atoms) {
            Tuple img(ra.slots.size());
            bool total = true;
            for (size_t i = 0; i < ra.slots.size(); ++i) {
                img[i] = assign[static_cast<size_t>(ra.slots[i])];
                if (img[i] < 0) {
                    total = false;
                    break;
                }
            }
            if (total && !target.has_fact(ra.sym, img)) return false;
        }
        return true;
    };

    std::vector<int> open;
    for (size_t i = 0; i < q.variables.size(); ++i)
        if (!fixed[i]) open.push_back(static_cast<int>(i));

    // Depth-first assignment of the existential variables.
    size_t depth = 0;
    if (!atoms_ok()) return false;
    if (open.empty()) return true;
    while (true) {
        size_t slot = static_cast<size_t>(open[depth]);
        int next = assign[slot] + 1;
        bool advanced = false;
        for (int v = next; v < static_cast<int>(target.domain.size()); ++v) {
            assign[slot] = v;
            if (atoms_ok()) {
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            assign[slot] = -1;
            if (depth == 0) return false;
            --depth;
            continue;
        }
        if (depth + 1 == open.size()) return true;
        ++depth;
    }
}

std::string to_text(const TaggedQuery& q) {
    std::ostringstream out;
    bool first = true;
    std::vector<std::string> bound;
    for (const auto& v : q.variables)
        if (std::find(q.free.begin(), q.free.end(), v) == q.free.end()) bound.push_back(v);
    if (!bound.empty()) {
        out << "exists";
        for (const auto& v : bound) out << ' ' << v;
        out << ". ";
    }
    if (q.atoms.empty()) out << "true";
    for (const auto& [name, args] : q.atoms) {
        if (!first) out << " & ";
        first = false;
        out << name << '(';
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) out << ',';
            out << args[i];
        }
        out << ')';
    }
    return out.str();
}

}  // namespace csplab
