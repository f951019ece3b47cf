#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

namespace causalgen {

// Sorted, duplicate-free set of column indices.
struct VariableSet {
    std::vector<int> indices;

    VariableSet() = default;
    VariableSet(std::initializer_list<int> init) : indices(init) { normalize(); }
    explicit VariableSet(std::vector<int> idx) : indices(std::move(idx)) { normalize(); }

    std::size_t size() const { return indices.size(); }
    bool empty() const { return indices.empty(); }
    bool contains(int i) const { return std::binary_search(indices.begin(), indices.end(), i); }

    bool intersects(const VariableSet& other) const {
        auto a = indices.begin();
        auto b = other.indices.begin();
        while (a != indices.end() && b != other.indices.end()) {
            if (*a == *b) return true;
            if (*a < *b)
                ++a;
            else
                ++b;
        }
        return false;
    }

    auto operator<=>(const VariableSet&) const = default;

private:
    void normalize() {
        std::sort(indices.begin(), indices.end());
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    }
};

}  // namespace causalgen
