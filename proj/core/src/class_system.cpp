#include "csplab/class_system.hpp"

#include <algorithm>

namespace csplab {

ClassSystem::ClassSystem(TemplateHandle t, int cap) : tmpl_(std::move(t)), cap_(cap) {
    by_arity_.resize(static_cast<size_t>(cap_) + 1);
    for (int m = 0; m <= cap_; ++m) by_arity_[static_cast<size_t>(m)] = classes(tmpl_, m, cap_);
}

int ClassSystem::index_of(const AssignmentClass& c) const {
    if (c.arity > cap_) return -1;
    const auto& v = by_arity_[static_cast<size_t>(c.arity)];
    auto it = std::lower_bound(v.begin(), v.end(), c);
    if (it == v.end() || !(*it == c)) return -1;
    return static_cast<int>(it - v.begin());
}

const std::vector<int>& ClassSystem::restriction_table(int m,
                                                       const std::vector<int>& positions) const {
    auto key = std::make_pair(m, positions);
    auto it = restrict_memo_.find(key);
    if (it != restrict_memo_.end()) return it->second;
    std::vector<int> table(static_cast<size_t>(count(m)));
    for (int i = 0; i < count(m); ++i) {
        AssignmentClass r = restrict_class(at(m, i), positions);
        int idx = index_of(r);
        if (idx < 0) throw std::logic_error("restriction escaped the class table");
        table[static_cast<size_t>(i)] = idx;
    }
    return restrict_memo_.emplace(std::move(key), std::move(table)).first->second;
}

bool ClassSystem::fact_holds(int sym, int m, const std::vector<int>& positions, int idx) const {
    auto key = std::make_tuple(sym, m, positions);
    auto it = holds_memo_.find(key);
    if (it == holds_memo_.end()) {
        std::vector<char> table(static_cast<size_t>(count(m)));
        for (int i = 0; i < count(m); ++i)
            table[static_cast<size_t>(i)] =
                class_holds(tmpl_, sym, restrict_class(at(m, i), positions)) ? 1 : 0;
        it = holds_memo_.emplace(std::move(key), std::move(table)).first;
    }
    return it->second[static_cast<size_t>(idx)] != 0;
}

const std::vector<int>& ClassSystem::extensions(int m, const std::vector<int>& positions,
                                                int idx) const {
    auto key = std::make_pair(m, positions);
    auto it = ext_memo_.find(key);
    if (it == ext_memo_.end()) {
        std::vector<std::vector<int>> lists(static_cast<size_t>(count(m - 1)));
        const auto& table = restriction_table(m, positions);
        for (int i = 0; i < count(m); ++i)
            lists[static_cast<size_t>(table[static_cast<size_t>(i)])].push_back(i);
        it = ext_memo_.emplace(std::move(key), std::move(lists)).first;
    }
    return it->second[static_cast<size_t>(idx)];
}

}  // namespace csplab
