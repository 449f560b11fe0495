#include "csplab/structure.hpp"

#include <fstream>
#include <sstream>

namespace csplab {

int Signature::index_of(std::string_view name) const {
    for (size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i].first == name) return static_cast<int>(i);
    return -1;
}

int Signature::max_arity() const {
    int m = 0;
    for (const auto& [name, ar] : symbols) m = std::max(m, ar);
    return m;
}

int Signature::add(std::string name, int arity) {
    if (arity < 0) throw std::invalid_argument("negative arity for symbol " + name);
    if (has(name)) throw std::invalid_argument("duplicate symbol " + name);
    symbols.emplace_back(std::move(name), arity);
    return static_cast<int>(symbols.size()) - 1;
}

int Structure::element_index(std::string_view name) const {
    for (size_t i = 0; i < domain.size(); ++i)
        if (domain[i] == name) return static_cast<int>(i);
    return -1;
}

int Structure::ensure_element(std::string_view name) {
    int idx = element_index(name);
    if (idx >= 0) return idx;
    domain.emplace_back(name);
    return static_cast<int>(domain.size()) - 1;
}

void Structure::add_fact(int sym, Tuple tuple) {
    if (sym < 0 || static_cast<size_t>(sym) >= sig.size())
        throw std::invalid_argument("unknown symbol index");
    if (static_cast<int>(tuple.size()) != sig.arity(sym))
        throw std::invalid_argument("arity mismatch for symbol " + sig.name(sym));
    for (int e : tuple)
        if (e < 0 || static_cast<size_t>(e) >= domain.size())
            throw std::invalid_argument("tuple entry outside domain");
    relations[static_cast<size_t>(sym)].insert(std::move(tuple));
}

void Structure::add_fact(std::string_view sym, const std::vector<std::string>& elems) {
    int s = sig.index_of(sym);
    if (s < 0) throw std::invalid_argument("undeclared symbol " + std::string(sym));
    Tuple t;
    t.reserve(elems.size());
    for (const auto& e : elems) t.push_back(ensure_element(e));
    add_fact(s, std::move(t));
}

bool Structure::has_fact(int sym, const Tuple& tuple) const {
    return relations[static_cast<size_t>(sym)].count(tuple) > 0;
}

size_t Structure::fact_count() const {
    size_t n = 0;
    for (const auto& r : relations) n += r.size();
    return n;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Structure parse_structure(std::istream& in) {
    Structure s;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "rel") {
            if (toks.size() != 3) throw ParseError("expected: rel NAME ARITY", lineno);
            int ar = 0;
            try {
                ar = std::stoi(toks[2]);
            } catch (const std::exception&) {
                throw ParseError("bad arity '" + toks[2] + "'", lineno);
            }
            if (ar < 0) throw ParseError("negative arity", lineno);
            if (s.sig.has(toks[1])) throw ParseError("duplicate symbol " + toks[1], lineno);
            s.sig.add(toks[1], ar);
            s.relations.emplace_back();
        } else if (toks[0] == "domain") {
            for (size_t i = 1; i < toks.size(); ++i) s.ensure_element(toks[i]);
        } else {
            int sym = s.sig.index_of(toks[0]);
            if (sym < 0) throw ParseError("undeclared symbol " + toks[0], lineno);
            if (static_cast<int>(toks.size()) - 1 != s.sig.arity(sym))
                throw ParseError("arity mismatch: " + toks[0] + " expects " +
                                     std::to_string(s.sig.arity(sym)) + " elements",
                                 lineno);
            Tuple t;
            for (size_t i = 1; i < toks.size(); ++i) t.push_back(s.ensure_element(toks[i]));
            s.relations[static_cast<size_t>(sym)].insert(std::move(t));
        }
    }
    return s;
}

Structure parse_structure(const std::string& text) {
    std::istringstream in(text);
    return parse_structure(in);
}

Structure load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_structure(in);
}

std::string to_text(const Structure& s) {
    std::ostringstream out;
    for (const auto& [name, ar] : s.sig.symbols) out << "rel " << name << ' ' << ar << '\n';
    if (!s.domain.empty()) {
        out << "domain";
        for (const auto& e : s.domain) out << ' ' << e;
        out << '\n';
    }
    for (size_t i = 0; i < s.relations.size(); ++i)
        for (const auto& t : s.relations[i]) {
            out << s.sig.name(static_cast<int>(i));
            for (int e : t) out << ' ' << s.domain[static_cast<size_t>(e)];
            out << '\n';
        }
    return out.str();
}

Structure disjoint_union(const Structure& a, const Structure& b) {
    if (a.sig != b.sig) throw std::invalid_argument("disjoint_union: signature mismatch");
    Structure u(a.sig);
    u.domain = a.domain;
    u.relations = a.relations;
    std::vector<int> remap(b.domain.size());
    for (size_t i = 0; i < b.domain.size(); ++i) {
        std::string name = b.domain[i];
        while (u.element_index(name) >= 0) name += "'";
        u.domain.push_back(name);
        remap[i] = static_cast<int>(u.domain.size()) - 1;
    }
    for (size_t r = 0; r < b.relations.size(); ++r)
        for (const auto& t : b.relations[r]) {
            Tuple m(t.size());
            for (size_t j = 0; j < t.size(); ++j) m[j] = remap[static_cast<size_t>(t[j])];
            u.relations[r].insert(std::move(m));
        }
    return u;
}

std::vector<std::set<int>> gaifman_adjacency(const Structure& s) {
    std::vector<std::set<int>> adj(s.domain.size());
    for (const auto& rel : s.relations)
        for (const auto& t : rel)
            for (size_t i = 0; i < t.size(); ++i)
                for (size_t j = i + 1; j < t.size(); ++j)
                    if (t[i] != t[j]) {
                        adj[static_cast<size_t>(t[i])].insert(t[j]);
                        adj[static_cast<size_t>(t[j])].insert(t[i]);
                    }
    return adj;
}

Structure gaifman_graph(const Structure& s) {
    Structure g;
    g.sig.add("adj", 2);
    g.relations.emplace_back();
    g.domain = s.domain;
    auto adj = gaifman_adjacency(s);
    for (size_t u = 0; u < adj.size(); ++u)
        for (int v : adj[u]) g.relations[0].insert({static_cast<int>(u), v});
    return g;
}

bool gaifman_connected(const Structure& s) {
    if (s.domain.size() <= 1) return true;
    auto adj = gaifman_adjacency(s);
    std::vector<char> seen(s.domain.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    size_t reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<size_t>(u)])
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = 1;
                ++reached;
                stack.push_back(v);
            }
    }
    return reached == s.domain.size();
}

}  // namespace csplab
