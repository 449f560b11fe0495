#include "csplab/datalog.hpp"

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

Atom parse_atom(const std::string& text, int lineno) {
    std::string t = strip(text);
    if (t.empty()) throw ParseError("empty atom", lineno);
    auto open = t.find('(');
    if (open == std::string::npos) {
        for (char c : t)
            if (c == ')' || c == ',' || isspace(static_cast<unsigned char>(c)))
                throw ParseError("bad atom '" + t + "'", lineno);
        return Atom{t, {}};
    }
    if (t.back() != ')') throw ParseError("missing ')' in atom '" + t + "'", lineno);
    Atom a;
    a.symbol = strip(t.substr(0, open));
    if (a.symbol.empty()) throw ParseError("missing symbol in atom '" + t + "'", lineno);
    std::string inner = t.substr(open + 1, t.size() - open - 2);
    if (!strip(inner).empty()) {
        std::istringstream ss(inner);
        std::string arg;
        while (std::getline(ss, arg, ',')) {
            arg = strip(arg);
            if (arg.empty()) throw ParseError("empty argument in atom '" + t + "'", lineno);
            a.args.push_back(arg);
        }
    }
    return a;
}

/// Splits "a1(x,y), a2(y,z)" at top-level commas.
std::vector<std::string> split_atoms(const std::string& text, int lineno) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth < 0) throw ParseError("unbalanced parentheses", lineno);
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (depth != 0) throw ParseError("unbalanced parentheses", lineno);
    if (!strip(cur).empty()) parts.push_back(cur);
    return parts;
}

}  // namespace

DatalogProgram parse_program(std::istream& in) {
    DatalogProgram p;
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
        if (kw == "edb" || kw == "idb") {
            std::string name;
            std::string ar_s;
            if (!(ss >> name >> ar_s)) throw ParseError("expected: " + kw + " NAME ARITY", lineno);
            int ar = 0;
            try {
                ar = std::stoi(ar_s);
            } catch (const std::exception&) {
                throw ParseError("bad arity '" + ar_s + "'", lineno);
            }
            if (p.edbs.has(name) || p.idbs.has(name))
                throw ParseError("duplicate symbol " + name, lineno);
            if (kw == "edb")
                p.edbs.add(name, ar);
            else
                p.idbs.add(name, ar);
            continue;
        }
        auto sep = t.find(":-");
        if (sep == std::string::npos)
            throw ParseError("expected a declaration or a rule with ':-'", lineno);
        std::string head_text = t.substr(0, sep);
        std::string body_text = strip(t.substr(sep + 2));
        if (!body_text.empty() && body_text.back() == '.') body_text.pop_back();
        Rule r;
        r.head = parse_atom(head_text, lineno);
        for (const auto& part : split_atoms(body_text, lineno))
            r.body.push_back(parse_atom(part, lineno));
        p.rules.push_back(std::move(r));
    }
    if (!p.idbs.has("false")) p.idbs.add("false", 0);
    validate_program(p);
    return p;
}

DatalogProgram parse_program(const std::string& text) {
    std::istringstream in(text);
    return parse_program(in);
}

DatalogProgram load_program(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_program(in);
}

void validate_program(const DatalogProgram& p) {
    for (const auto& [name, ar] : p.edbs.symbols)
        if (p.idbs.has(name))
            throw std::invalid_argument("symbol " + name + " declared both EDB and IDB");
    auto check_atom = [&](const Atom& a) {
        int sym = p.edbs.index_of(a.symbol);
        int ar = sym >= 0 ? p.edbs.arity(sym) : -1;
        if (sym < 0) {
            sym = p.idbs.index_of(a.symbol);
            if (sym < 0) throw std::invalid_argument("undeclared symbol " + a.symbol);
            ar = p.idbs.arity(sym);
        }
        if (static_cast<int>(a.args.size()) != ar)
            throw std::invalid_argument("arity mismatch in atom " + a.symbol);
    };
    for (const auto& r : p.rules) {
        if (p.edbs.has(r.head.symbol))
            throw std::invalid_argument("EDB symbol " + r.head.symbol + " in rule head");
        if (!p.idbs.has(r.head.symbol))
            throw std::invalid_argument("undeclared head symbol " + r.head.symbol);
        check_atom(r.head);
        for (const auto& a : r.body) check_atom(a);
        for (const auto& v : r.head.args) {
            bool found = false;
            for (const auto& a : r.body)
                if (std::find(a.args.begin(), a.args.end(), v) != a.args.end()) found = true;
            if (!found)
                throw std::invalid_argument("head variable " + v + " does not occur in the body");
        }
    }
}

std::pair<int, int> program_width(const DatalogProgram& p) {
    int l = 0, k = 0;
    for (const auto& r : p.rules) {
        std::set<std::string> head_vars(r.head.args.begin(), r.head.args.end());
        std::set<std::string> all_vars = head_vars;
        for (const auto& a : r.body) all_vars.insert(a.args.begin(), a.args.end());
        l = std::max(l, static_cast<int>(head_vars.size()));
        k = std::max(k, static_cast<int>(all_vars.size()));
    }
    return {l, k};
}

namespace {

/// Evaluation state: one unified symbol space, EDBs first.
struct EvalState {
    const DatalogProgram& p;
    const Structure& instance;
    size_t edb_count;
    std::vector<std::set<Tuple>> full;  // per unified symbol

    struct CompiledAtom {
        int sym;       // unified symbol
        bool is_idb;
        std::vector<int> var_slots;  // rule-local variable ids per position
    };
    struct CompiledRule {
        CompiledAtom head;
        std::vector<CompiledAtom> body;
        std::vector<std::string> var_names;  // slot -> name
    };
    std::vector<CompiledRule> rules;

    EvalState(const DatalogProgram& prog, const Structure& inst)
        : p(prog), instance(inst), edb_count(prog.edbs.size()) {
        if (inst.sig != p.edbs)
            throw std::invalid_argument("instance signature does not match program EDBs");
        full.resize(p.edbs.size() + p.idbs.size());
        for (size_t i = 0; i < p.edbs.size(); ++i) full[i] = inst.relations[i];
        for (const auto& r : p.rules) {
            CompiledRule cr;
            auto compile = [&](const Atom& a) {
                CompiledAtom ca;
                int e = p.edbs.index_of(a.symbol);
                if (e >= 0) {
                    ca.sym = e;
                    ca.is_idb = false;
                } else {
                    ca.sym = static_cast<int>(edb_count) + p.idbs.index_of(a.symbol);
                    ca.is_idb = true;
                }
                for (const auto& v : a.args) {
                    auto it = std::find(cr.var_names.begin(), cr.var_names.end(), v);
                    if (it == cr.var_names.end()) {
                        cr.var_names.push_back(v);
                        ca.var_slots.push_back(static_cast<int>(cr.var_names.size()) - 1);
                    } else {
                        ca.var_slots.push_back(
                            static_cast<int>(it - cr.var_names.begin()));
                    }
                }
                return ca;
            };
            for (const auto& a : r.body) cr.body.push_back(compile(a));
            cr.head = compile(r.head);  // head vars occur in body, so no new slots
            rules.push_back(std::move(cr));
        }
    }

    std::string unified_name(int sym) const {
        if (sym < static_cast<int>(edb_count)) return p.edbs.name(sym);
        return p.idbs.name(sym - static_cast<int>(edb_count));
    }
};

}  // namespace

namespace {

/// Enumerates all matches of `rule` where body atom `delta_pos` (if >= 0)
/// draws from `delta` instead of the full relation. Calls sink(binding).
template <typename Sink>
void join_rule(const EvalState& st, const EvalState::CompiledRule& rule, int delta_pos,
               const std::vector<std::set<Tuple>>* delta, Sink&& sink) {
    std::vector<int> binding(rule.var_names.size(), -1);
    std::vector<const Tuple*> used(rule.body.size(), nullptr);

    auto source = [&](size_t i) -> const std::set<Tuple>& {
        if (static_cast<int>(i) == delta_pos) return (*delta)[static_cast<size_t>(rule.body[i].sym)];
        return st.full[static_cast<size_t>(rule.body[i].sym)];
    };

    // Recursive lambda over body positions.
    auto step = [&](auto&& self, size_t i) -> void {
        if (i == rule.body.size()) {
            sink(binding, used);
            return;
        }
        const auto& atom = rule.body[i];
        for (const Tuple& t : source(i)) {
            bool ok = true;
            std::vector<std::pair<int, int>> bound_here;
            for (size_t j = 0; j < atom.var_slots.size(); ++j) {
                int slot = atom.var_slots[j];
                int cur = binding[static_cast<size_t>(slot)];
                if (cur < 0) {
                    binding[static_cast<size_t>(slot)] = t[j];
                    bound_here.emplace_back(slot, -1);
                } else if (cur != t[j]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                used[i] = &t;
                self(self, i + 1);
            }
            for (auto& [slot, old] : bound_here) binding[static_cast<size_t>(slot)] = old;
        }
    };
    step(step, 0);
}

GroundFact make_fact(const EvalState& st, const EvalState::CompiledAtom& atom,
                     const std::vector<int>& binding) {
    GroundFact f;
    f.symbol = st.unified_name(atom.sym);
    f.args.reserve(atom.var_slots.size());
    for (int slot : atom.var_slots) f.args.push_back(binding[static_cast<size_t>(slot)]);
    return f;
}

EvalResult run_fixpoint(const DatalogProgram& p, const Structure& instance, bool semi_naive) {
    EvalState st(p, instance);
    EvalResult result;
    result.trace.steps.clear();

    auto record = [&](size_t rule_idx, const std::vector<int>& binding,
                      const std::vector<const Tuple*>& used,
                      std::vector<std::set<Tuple>>& pending) {
        const auto& rule = st.rules[rule_idx];
        Tuple head_tuple;
        head_tuple.reserve(rule.head.var_slots.size());
        for (int slot : rule.head.var_slots)
            head_tuple.push_back(binding[static_cast<size_t>(slot)]);
        size_t hs = static_cast<size_t>(rule.head.sym);
        if (st.full[hs].count(head_tuple) || pending[hs].count(head_tuple)) return;
        pending[hs].insert(head_tuple);

        DerivationStep step;
        step.derived = GroundFact{st.unified_name(rule.head.sym), head_tuple};
        step.rule_index = static_cast<int>(rule_idx);
        for (size_t i = 0; i < rule.body.size(); ++i) {
            GroundFact bf;
            bf.symbol = st.unified_name(rule.body[i].sym);
            bf.args = *used[i];
            step.body_facts.push_back(std::move(bf));
        }
        for (size_t s = 0; s < rule.var_names.size(); ++s)
            step.assignment[rule.var_names[s]] = binding[s];
        result.trace.steps.push_back(std::move(step));
    };

    // Round 0: every rule against the initial state (IDB relations empty).
    std::vector<std::set<Tuple>> delta(st.full.size());
    {
        std::vector<std::set<Tuple>> pending(st.full.size());
        for (size_t ri = 0; ri < st.rules.size(); ++ri)
            join_rule(st, st.rules[ri], -1, nullptr,
                      [&](const std::vector<int>& b, const std::vector<const Tuple*>& u) {
                          record(ri, b, u, pending);
                      });
        for (size_t s = 0; s < pending.size(); ++s)
            for (const auto& t : pending[s]) st.full[s].insert(t);
        delta = std::move(pending);
    }

    auto delta_empty = [&]() {
        for (const auto& d : delta)
            if (!d.empty()) return false;
        return true;
    };

    while (!delta_empty()) {
        std::vector<std::set<Tuple>> pending(st.full.size());
        if (semi_naive) {
            for (size_t ri = 0; ri < st.rules.size(); ++ri) {
                const auto& rule = st.rules[ri];
                for (size_t pos = 0; pos < rule.body.size(); ++pos) {
                    if (!rule.body[pos].is_idb) continue;
                    join_rule(st, rule, static_cast<int>(pos), &delta,
                              [&](const std::vector<int>& b,
                                  const std::vector<const Tuple*>& u) {
                                  record(ri, b, u, pending);
                              });
                }
            }
        } else {
            for (size_t ri = 0; ri < st.rules.size(); ++ri)
                join_rule(st, st.rules[ri], -1, nullptr,
                          [&](const std::vector<int>& b, const std::vector<const Tuple*>& u) {
                              record(ri, b, u, pending);
                          });
        }
        for (size_t s = 0; s < pending.size(); ++s)
            for (const auto& t : pending[s]) st.full[s].insert(t);
        delta = std::move(pending);
    }

    // Assemble the result structure over edbs followed by idbs.
    Signature joint = p.edbs;
    for (const auto& [name, ar] : p.idbs.symbols) joint.add(name, ar);
    result.facts = Structure(joint);
    result.facts.domain = instance.domain;
    for (size_t s = 0; s < st.full.size(); ++s) result.facts.relations[s] = st.full[s];
    int f = p.false_index();
    result.derived_false =
        f >= 0 && !st.full[st.edb_count + static_cast<size_t>(f)].empty();
    return result;
}

}  // namespace

EvalResult evaluate(const DatalogProgram& p, const Structure& instance) {
    return run_fixpoint(p, instance, true);
}

EvalResult evaluate_naive(const DatalogProgram& p, const Structure& instance) {
    return run_fixpoint(p, instance, false);
}

bool derives_false(const DatalogProgram& p, const Structure& instance) {
    return evaluate(p, instance).derived_false;
}

std::set<GroundFact> derived_facts(const DatalogProgram& p, const EvalResult& r) {
    std::set<GroundFact> out;
    for (size_t i = p.edbs.size(); i < r.facts.relations.size(); ++i)
        for (const auto& t : r.facts.relations[i])
            out.insert(GroundFact{r.facts.sig.name(static_cast<int>(i)), t});
    return out;
}

bool replay_trace(const DerivationTrace& trace, const DatalogProgram& p,
                  const Structure& instance, const std::set<GroundFact>& expected) {
    std::set<GroundFact> derived;
    auto available = [&](const GroundFact& f) {
        int e = p.edbs.index_of(f.symbol);
        if (e >= 0) return instance.has_fact(e, f.args);
        return derived.count(f) > 0;
    };
    for (const auto& step : trace.steps) {
        if (step.rule_index < 0 || static_cast<size_t>(step.rule_index) >= p.rules.size())
            return false;
        const Rule& rule = p.rules[static_cast<size_t>(step.rule_index)];
        if (rule.body.size() != step.body_facts.size()) return false;
        auto instantiate = [&](const Atom& a) {
            GroundFact f;
            f.symbol = a.symbol;
            for (const auto& v : a.args) {
                auto it = step.assignment.find(v);
                if (it == step.assignment.end()) throw std::invalid_argument("unbound " + v);
                f.args.push_back(it->second);
            }
            return f;
        };
        try {
            for (size_t i = 0; i < rule.body.size(); ++i) {
                GroundFact f = instantiate(rule.body[i]);
                if (!(f == step.body_facts[i])) return false;
                if (!available(f)) return false;
            }
            GroundFact h = instantiate(rule.head);
            if (!(h == step.derived)) return false;
            derived.insert(h);
        } catch (const std::invalid_argument&) {
            return false;
        }
    }
    return derived == expected;
}

std::string to_text(const DatalogProgram& p) {
    std::ostringstream out;
    for (const auto& [name, ar] : p.edbs.symbols) out << "edb " << name << ' ' << ar << '\n';
    for (const auto& [name, ar] : p.idbs.symbols)
        if (name != "false") out << "idb " << name << ' ' << ar << '\n';
    auto atom_text = [](const Atom& a) {
        std::string s = a.symbol;
        if (!a.args.empty()) {
            s += '(';
            for (size_t i = 0; i < a.args.size(); ++i) {
                if (i) s += ',';
                s += a.args[i];
            }
            s += ')';
        }
        return s;
    };
    for (const auto& r : p.rules) {
        out << atom_text(r.head) << " :- ";
        for (size_t i = 0; i < r.body.size(); ++i) {
            if (i) out << ", ";
            out << atom_text(r.body[i]);
        }
        out << ".\n";
    }
    return out.str();
}

}  // namespace csplab
