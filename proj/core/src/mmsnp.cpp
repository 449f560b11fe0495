#include "csplab/mmsnp.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace csplab {

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

MmsnpSentence parse_mmsnp(std::istream& in) {
    MmsnpSentence phi;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = strip(line);
        if (t.empty()) continue;
        std::istringstream ss(t);
        std::string kw;
        ss >> kw;
        if (kw == "input") {
            std::string name, ar_s;
            if (!(ss >> name >> ar_s)) throw ParseError("expected: input NAME ARITY", lineno);
            int ar = 0;
            try {
                ar = std::stoi(ar_s);
            } catch (const std::exception&) {
                throw ParseError("bad arity '" + ar_s + "'", lineno);
            }
            if (phi.input_sig.has(name) ||
                std::find(phi.monadic.begin(), phi.monadic.end(), name) != phi.monadic.end())
                throw ParseError("duplicate symbol " + name, lineno);
            phi.input_sig.add(name, ar);
        } else if (kw == "monadic") {
            std::string name;
            if (!(ss >> name)) throw ParseError("expected: monadic NAME", lineno);
            if (phi.input_sig.has(name) ||
                std::find(phi.monadic.begin(), phi.monadic.end(), name) != phi.monadic.end())
                throw ParseError("duplicate symbol " + name, lineno);
            phi.monadic.push_back(name);
        } else if (kw == "deny") {
            MmsnpClause clause;
            std::string rest;
            std::getline(ss, rest);
            // Split on top-level commas.
            std::vector<std::string> parts;
            std::string cur;
            int depth = 0;
            for (char c : rest) {
                if (c == '(') ++depth;
                if (c == ')') --depth;
                if (c == ',' && depth == 0) {
                    parts.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            if (!strip(cur).empty()) parts.push_back(cur);
            if (parts.empty()) throw ParseError("empty deny clause", lineno);

            auto var_id = [&](const std::string& v) {
                for (size_t i = 0; i < clause.var_names.size(); ++i)
                    if (clause.var_names[i] == v) return static_cast<int>(i);
                clause.var_names.push_back(v);
                return static_cast<int>(clause.var_names.size()) - 1;
            };
            for (auto& part : parts) {
                std::string p = strip(part);
                if (p.empty()) throw ParseError("empty literal", lineno);
                if (p.find("!=") != std::string::npos || p.find("=") != std::string::npos)
                    throw ParseError("inequality atoms are not allowed in MMSNP", lineno);
                MmsnpLiteral lit;
                if (p[0] == '!') {
                    lit.negated = true;
                    p = strip(p.substr(1));
                }
                auto open = p.find('(');
                if (open == std::string::npos || p.back() != ')')
                    throw ParseError("bad literal '" + p + "'", lineno);
                std::string name = strip(p.substr(0, open));
                std::string inner = p.substr(open + 1, p.size() - open - 2);
                std::vector<std::string> args;
                std::istringstream as(inner);
                std::string a;
                while (std::getline(as, a, ',')) {
                    a = strip(a);
                    if (a.empty()) throw ParseError("empty argument in '" + p + "'", lineno);
                    args.push_back(a);
                }
                auto mono =
                    std::find(phi.monadic.begin(), phi.monadic.end(), name);
                if (mono != phi.monadic.end()) {
                    lit.monadic = true;
                    lit.symbol = static_cast<int>(mono - phi.monadic.begin());
                    if (args.size() != 1)
                        throw ParseError(
                            "existential predicate " + name + " must be monadic (used with " +
                                std::to_string(args.size()) + " arguments)",
                            lineno);
                } else {
                    int sym = phi.input_sig.index_of(name);
                    if (sym < 0) throw ParseError("undeclared symbol " + name, lineno);
                    if (lit.negated)
                        throw ParseError(
                            "input relation " + name +
                                " occurs positively in the sentence (negated in a body)",
                            lineno);
                    lit.monadic = false;
                    lit.symbol = sym;
                    if (static_cast<int>(args.size()) != phi.input_sig.arity(sym))
                        throw ParseError("arity mismatch in literal " + name, lineno);
                }
                for (const auto& v : args) lit.vars.push_back(var_id(v));
                clause.literals.push_back(std::move(lit));
            }
            phi.clauses.push_back(std::move(clause));
        } else {
            throw ParseError("expected input/monadic/deny, got '" + kw + "'", lineno);
        }
    }
    return phi;
}

MmsnpSentence parse_mmsnp(const std::string& text) {
    std::istringstream in(text);
    return parse_mmsnp(in);
}

MmsnpSentence load_mmsnp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_mmsnp(in);
}

namespace {

/// Does some assignment of the clause variables match every literal? The
/// monadic coloring is a bit matrix: color[p * n + v].
bool clause_matches(const MmsnpClause& clause, const Structure& s,
                    const std::vector<char>& color, size_t n) {
    size_t vars = clause.var_names.size();
    std::vector<int> assign(vars, -1);

    // Literal order: input atoms first restrict candidates fastest.
    std::vector<const MmsnpLiteral*> order;
    for (const auto& lit : clause.literals)
        if (!lit.monadic) order.push_back(&lit);
    for (const auto& lit : clause.literals)
        if (lit.monadic) order.push_back(&lit);

    auto rec = [&](auto&& self, size_t li) -> bool {
        if (li == order.size()) {
            // Unconstrained variables may take any element; require one.
            for (size_t v = 0; v < vars; ++v)
                if (assign[v] < 0 && s.domain.empty()) return false;
            return true;
        }
        const MmsnpLiteral& lit = *order[li];
        if (lit.monadic) {
            int v = lit.vars[0];
            if (assign[static_cast<size_t>(v)] >= 0) {
                bool in =
                    color[static_cast<size_t>(lit.symbol) * n +
                          static_cast<size_t>(assign[static_cast<size_t>(v)])] != 0;
                return in != lit.negated && self(self, li + 1);
            }
            for (size_t e = 0; e < n; ++e) {
                bool in = color[static_cast<size_t>(lit.symbol) * n + e] != 0;
                if (in == lit.negated) continue;
                assign[static_cast<size_t>(v)] = static_cast<int>(e);
                if (self(self, li + 1)) {
                    assign[static_cast<size_t>(v)] = -1;
                    return true;
                }
                assign[static_cast<size_t>(v)] = -1;
            }
            return false;
        }
        for (const auto& fact : s.relations[static_cast<size_t>(lit.symbol)]) {
            bool ok = true;
            std::vector<int> bound;
            for (size_t i = 0; i < fact.size(); ++i) {
                int v = lit.vars[i];
                int cur = assign[static_cast<size_t>(v)];
                if (cur < 0) {
                    assign[static_cast<size_t>(v)] = fact[i];
                    bound.push_back(v);
                } else if (cur != fact[i]) {
                    ok = false;
                    break;
                }
            }
            if (ok && self(self, li + 1)) {
                for (int v : bound) assign[static_cast<size_t>(v)] = -1;
                return true;
            }
            for (int v : bound) assign[static_cast<size_t>(v)] = -1;
        }
        return false;
    };
    return rec(rec, 0);
}

}  // namespace

bool model_check(const MmsnpSentence& phi, const Structure& s, size_t budget) {
    if (s.sig != phi.input_sig)
        throw std::invalid_argument("instance signature does not match the sentence inputs");
    size_t n = s.domain.size();
    size_t p = phi.monadic.size();
    size_t bits = n * p;
    if (bits >= 63 || (size_t{1} << bits) > budget)
        throw BudgetError("monadic expansion enumeration exceeds budget");

    std::vector<char> color(bits, 0);
    uint64_t total = uint64_t{1} << bits;
    for (uint64_t mask = 0; mask < total; ++mask) {
        for (size_t b = 0; b < bits; ++b) color[b] = (mask >> b) & 1 ? 1 : 0;
        bool good = true;
        for (const auto& clause : phi.clauses)
            if (clause_matches(clause, s, color, n)) {
                good = false;
                break;
            }
        if (good) return true;
    }
    return false;
}

std::vector<Structure> obstruction_structures(const MmsnpSentence& phi) {
    // Expanded signature: inputs, then P_i, then primed P_i'.
    Signature expanded = phi.input_sig;
    for (const auto& m : phi.monadic) expanded.add(m, 1);
    for (const auto& m : phi.monadic) expanded.add(m + "'", 1);

    std::vector<Structure> out;
    for (const auto& clause : phi.clauses) {
        Structure s(expanded);
        for (const auto& v : clause.var_names) s.ensure_element(v);
        for (const auto& lit : clause.literals) {
            if (lit.monadic) {
                int sym = static_cast<int>(phi.input_sig.size()) + lit.symbol +
                          (lit.negated ? static_cast<int>(phi.monadic.size()) : 0);
                s.add_fact(sym, {lit.vars[0]});
            } else {
                s.add_fact(lit.symbol, Tuple(lit.vars.begin(), lit.vars.end()));
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<bool> connectivity_report(const std::vector<Structure>& obstructions) {
    std::vector<bool> out;
    out.reserve(obstructions.size());
    for (const auto& s : obstructions) out.push_back(gaifman_connected(s));
    return out;
}

bool decide_by_obstructions(const std::vector<Structure>& obstructions,
                            const Structure& instance) {
    for (const auto& n : obstructions) {
        if (n.sig != instance.sig)
            throw std::invalid_argument("obstruction signature does not match the instance");
        if (find_homomorphism(n, instance).has_value()) return false;
    }
    return true;
}

UnionClosureReport disjoint_union_closure_probe(const MmsnpSentence& phi,
                                                const std::vector<Structure>& samples,
                                                size_t budget) {
    UnionClosureReport report;
    std::vector<char> holds(samples.size());
    for (size_t i = 0; i < samples.size(); ++i)
        holds[i] = model_check(phi, samples[i], budget) ? 1 : 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (!holds[i]) continue;
        for (size_t j = i; j < samples.size(); ++j) {
            if (!holds[j]) continue;
            ++report.pairs_checked;
            Structure u = disjoint_union(samples[i], samples[j]);
            if (!model_check(phi, u, budget)) {
                report.violation = std::make_pair(samples[i], samples[j]);
                return report;
            }
        }
    }
    return report;
}

}  // namespace csplab
