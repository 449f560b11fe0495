#include <algorithm>
#include <map>

#include "csplab/treewidth.hpp"

namespace csplab {

namespace {

/// Builds the gadget structure bottom-up over the derivation: every
/// extensional body fact becomes a fresh block of vertices; vertices are
/// identified exactly where rule variables coincide. Derived facts used
/// several times unfold into fresh copies.
struct ObstructionBuilder {
    const DerivationTrace& trace;
    const DatalogProgram& program;
    std::map<GroundFact, int> step_of;

    std::vector<int> label;   // vertex -> instance element
    std::vector<int> dsu;

    int find(int v) {
        while (dsu[static_cast<size_t>(v)] != v) {
            dsu[static_cast<size_t>(v)] = dsu[static_cast<size_t>(dsu[static_cast<size_t>(v)])];
            v = dsu[static_cast<size_t>(v)];
        }
        return v;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) dsu[static_cast<size_t>(b)] = a;
    }
    int fresh(int lab) {
        label.push_back(lab);
        dsu.push_back(static_cast<int>(dsu.size()));
        return static_cast<int>(dsu.size()) - 1;
    }

    std::vector<std::pair<int, Tuple>> facts;  // (edb symbol, vertex tuple)

    /// Returns the vertices standing for the derived fact's argument tuple.
    std::vector<int> build(int step_idx) {
        const DerivationStep& step = trace.steps[static_cast<size_t>(step_idx)];
        const Rule& rule = program.rules[static_cast<size_t>(step.rule_index)];

        // Vertices per body atom position.
        std::vector<std::vector<int>> atom_verts(rule.body.size());
        for (size_t i = 0; i < rule.body.size(); ++i) {
            const GroundFact& f = step.body_facts[i];
            if (program.edbs.has(f.symbol)) {
                for (int e : f.args) atom_verts[i].push_back(fresh(e));
                // The gadget fact uses the fresh block verbatim.
                facts.emplace_back(program.edbs.index_of(f.symbol), Tuple{});
                auto& t = facts.back().second;
                t = Tuple(atom_verts[i].begin(), atom_verts[i].end());
            } else {
                auto it = step_of.find(f);
                if (it == step_of.end())
                    throw std::invalid_argument("trace references an underived fact");
                atom_verts[i] = build(it->second);
            }
        }

        // Identify positions carrying the same rule variable (head included;
        // every head variable occurs in the body).
        std::map<std::string, int> rep;  // variable -> representative vertex
        for (size_t i = 0; i < rule.body.size(); ++i)
            for (size_t j = 0; j < rule.body[i].args.size(); ++j) {
                const std::string& var = rule.body[i].args[j];
                auto [it, fresh_var] = rep.try_emplace(var, atom_verts[i][j]);
                if (!fresh_var) unite(it->second, atom_verts[i][j]);
            }

        std::vector<int> head;
        head.reserve(rule.head.args.size());
        for (const auto& var : rule.head.args) head.push_back(rep.at(var));
        return head;
    }
};

}  // namespace

Structure obstruction_from_trace(const DerivationTrace& trace, const DatalogProgram& program,
                                 const Structure& instance) {
    int false_step = -1;
    for (size_t i = 0; i < trace.steps.size(); ++i)
        if (trace.steps[i].derived.symbol == "false") {
            false_step = static_cast<int>(i);
            break;
        }
    if (false_step < 0) throw std::invalid_argument("trace does not derive false");

    ObstructionBuilder builder{trace, program, {}, {}, {}, {}};
    for (size_t i = 0; i < trace.steps.size(); ++i)
        builder.step_of.try_emplace(trace.steps[i].derived, static_cast<int>(i));
    builder.build(false_step);

    // Compact the union-find classes into a structure over the EDBs.
    Structure out(program.edbs);
    std::map<int, int> compact;
    for (int v = 0; v < static_cast<int>(builder.dsu.size()); ++v) {
        int r = builder.find(v);
        if (compact.count(r)) continue;
        int idx = static_cast<int>(compact.size());
        compact[r] = idx;
        out.ensure_element("w" + std::to_string(idx) + "_" +
                           instance.domain[static_cast<size_t>(builder.label[static_cast<size_t>(r)])]);
    }
    for (const auto& [sym, t] : builder.facts) {
        Tuple m(t.size());
        for (size_t i = 0; i < t.size(); ++i) m[i] = compact.at(builder.find(t[i]));
        out.add_fact(sym, std::move(m));
    }
    return out;
}

}  // namespace csplab
