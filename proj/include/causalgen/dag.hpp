#pragma once

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "causalgen/errors.hpp"
#include "causalgen/variable_set.hpp"

namespace causalgen {

using Edge = std::pair<int, int>;

// Directed acyclic graph over feature indices. Edge (i, j) reads "i causes j".
// Acyclicity is enforced on every insertion, so a constructed Dag is always
// valid and safe to share read-only.
class Dag {
public:
    Dag() = default;
    explicit Dag(int n_nodes) : n_(n_nodes) {
        if (n_nodes < 0) throw IndexError("negative node count");
    }

    int n_nodes() const { return n_; }
    const std::set<Edge>& edges() const { return edges_; }
    std::size_t n_edges() const { return edges_.size(); }

    bool has_edge(int i, int j) const { return edges_.count({i, j}) > 0; }

    // true if adding (i, j) would close a directed cycle, i.e. j reaches i
    bool would_create_cycle(int i, int j) const {
        check_index(i);
        check_index(j);
        if (i == j) return true;
        std::vector<int> stack{j};
        std::vector<bool> seen(static_cast<std::size_t>(n_), false);
        seen[static_cast<std::size_t>(j)] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (u == i) return true;
            for (const auto& [a, b] : edges_) {
                if (a == u && !seen[static_cast<std::size_t>(b)]) {
                    seen[static_cast<std::size_t>(b)] = true;
                    stack.push_back(b);
                }
            }
        }
        return false;
    }

    // inserting an existing edge is a no-op (set semantics)
    void add_edge(int i, int j) {
        check_index(i);
        check_index(j);
        if (i == j) throw CycleError("self-loop " + std::to_string(i));
        if (has_edge(i, j)) return;
        if (would_create_cycle(i, j))
            throw CycleError("edge " + std::to_string(i) + "->" + std::to_string(j) +
                             " would create a cycle");
        edges_.insert({i, j});
    }

    Dag with_edge(int i, int j) const {
        Dag out = *this;
        out.add_edge(i, j);
        return out;
    }

    bool operator==(const Dag& other) const = default;

    nlohmann::json to_json(const std::vector<std::string>& names) const {
        if (static_cast<int>(names.size()) != n_)
            throw NodeCountMismatchError("name count does not match node count");
        nlohmann::json j;
        j["nodes"] = names;
        auto arr = nlohmann::json::array();
        for (const auto& [a, b] : edges_) arr.push_back({a, b});
        j["edges"] = arr;
        return j;
    }

    static std::pair<Dag, std::vector<std::string>> from_json(const nlohmann::json& j) {
        std::vector<std::string> names = j.at("nodes").get<std::vector<std::string>>();
        Dag dag(static_cast<int>(names.size()));
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw ValidationError("DAG edge must be a pair [i, j]");
            dag.add_edge(e[0].get<int>(), e[1].get<int>());
        }
        return {dag, names};
    }

    static std::pair<Dag, std::vector<std::string>> from_json_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw IoError("cannot open file: " + path);
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("invalid DAG JSON in " + path + ": " + e.what());
        }
        return from_json(j);
    }

    std::string to_dot(const std::vector<std::string>& names) const {
        if (static_cast<int>(names.size()) != n_)
            throw NodeCountMismatchError("name count does not match node count");
        std::string out = "digraph g {\n";
        for (const auto& name : names) out += "  \"" + name + "\";\n";
        for (const auto& [a, b] : edges_)
            out += "  \"" + names[static_cast<std::size_t>(a)] + "\" -> \"" +
                   names[static_cast<std::size_t>(b)] + "\";\n";
        out += "}\n";
        return out;
    }

private:
    void check_index(int i) const {
        if (i < 0 || i >= n_) throw IndexError("node index " + std::to_string(i) + " out of range");
    }

    int n_ = 0;
    std::set<Edge> edges_;
};

// Kahn's algorithm with a min-index frontier: deterministic, and isolated
// nodes appear in ascending index order.
inline std::vector<int> topological_sort(const Dag& dag) {
    const int n = dag.n_nodes();
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : dag.edges()) indeg[static_cast<std::size_t>(b)]++;
    std::priority_queue<int, std::vector<int>, std::greater<>> frontier;
    for (int i = 0; i < n; ++i)
        if (indeg[static_cast<std::size_t>(i)] == 0) frontier.push(i);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    while (!frontier.empty()) {
        int u = frontier.top();
        frontier.pop();
        order.push_back(u);
        for (const auto& [a, b] : dag.edges()) {
            if (a == u && --indeg[static_cast<std::size_t>(b)] == 0) frontier.push(b);
        }
    }
    return order;
}

inline VariableSet parents(const Dag& dag, int j) {
    if (j < 0 || j >= dag.n_nodes()) throw IndexError("node index out of range");
    std::vector<int> out;
    for (const auto& [a, b] : dag.edges())
        if (b == j) out.push_back(a);
    return VariableSet(std::move(out));
}

}  // namespace causalgen
