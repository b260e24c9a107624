#include "distfobs/graphkit.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace distfobs {

int SpanningTree::depth(int node) const {
    int d = 0;
    while (node != root) {
        auto it = parent.find(node);
        if (it == parent.end())
            throw InvalidNode("SpanningTree::depth: node not in tree");
        node = it->second;
        ++d;
    }
    return d;
}

DiGraph::DiGraph(int node_count) : n_(node_count) {
    if (node_count < 1)
        throw ValidationError("DiGraph: need at least one node");
    out_.resize(static_cast<size_t>(n_ + 1));
    in_.resize(static_cast<size_t>(n_ + 1));
}

void DiGraph::check_node(int i) const {
    if (i < 1 || i > n_)
        throw InvalidNode("DiGraph: node " + std::to_string(i) +
                          " outside 1.." + std::to_string(n_));
}

void DiGraph::add_edge(int from, int to) {
    check_node(from);
    check_node(to);
    if (from == to) return;  // self-inclusion is implicit
    auto& o = out_[static_cast<size_t>(from)];
    auto it = std::lower_bound(o.begin(), o.end(), to);
    if (it != o.end() && *it == to) return;
    o.insert(it, to);
    auto& in = in_[static_cast<size_t>(to)];
    in.insert(std::lower_bound(in.begin(), in.end(), from), from);
}

bool DiGraph::has_edge(int from, int to) const {
    check_node(from);
    check_node(to);
    const auto& o = out_[static_cast<size_t>(from)];
    return std::binary_search(o.begin(), o.end(), to);
}

const std::vector<int>& DiGraph::in_neighbors(int i) const {
    check_node(i);
    return in_[static_cast<size_t>(i)];
}

const std::vector<int>& DiGraph::out_neighbors(int i) const {
    check_node(i);
    return out_[static_cast<size_t>(i)];
}

std::vector<int> DiGraph::neighborhood(int i) const {
    check_node(i);
    std::vector<int> nb = in_[static_cast<size_t>(i)];
    nb.insert(std::lower_bound(nb.begin(), nb.end(), i), i);
    return nb;
}

namespace {

int reach_count(int n, int start, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(static_cast<size_t>(n + 1), 0);
    std::deque<int> q{start};
    seen[static_cast<size_t>(start)] = 1;
    int count = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : adj[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                ++count;
                q.push_back(w);
            }
        }
    }
    return count;
}

}  // namespace

bool DiGraph::is_strongly_connected() const {
    // Forward and reverse reachability from node 1 covers everything.
    return reach_count(n_, 1, out_) == n_ && reach_count(n_, 1, in_) == n_;
}

SpanningTree DiGraph::spanning_tree_rooted_at(int root) const {
    check_node(root);
    SpanningTree t;
    t.root = root;
    std::vector<char> seen(static_cast<size_t>(n_ + 1), 0);
    std::deque<int> q{root};
    seen[static_cast<size_t>(root)] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        t.order.push_back(v);
        for (int w : out_[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                t.parent[w] = v;
                q.push_back(w);
            }
        }
    }
    if (static_cast<int>(t.order.size()) != n_)
        throw NotStronglyConnected(
            "spanning_tree_rooted_at: node " + std::to_string(root) +
            " cannot reach the whole network");
    return t;
}

std::vector<std::pair<int, int>> DiGraph::edges() const {
    std::vector<std::pair<int, int>> e;
    for (int v = 1; v <= n_; ++v)
        for (int w : out_[static_cast<size_t>(v)]) e.emplace_back(v, w);
    return e;
}

}  // namespace distfobs
