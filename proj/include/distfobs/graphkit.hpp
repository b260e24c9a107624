#pragma once

#include <map>
#include <vector>

#include "distfobs/errors.hpp"

namespace distfobs {

// BFS spanning tree rooted at a node that can reach every other node.
// `parent` has an entry for every node except the root; `order` lists all
// nodes in BFS discovery order starting with the root, which is also a
// topological order of the tree (parents before children).
struct SpanningTree {
    int root = 0;
    std::map<int, int> parent;
    std::vector<int> order;

    int depth(int node) const;
};

// Simple directed graph over nodes 1..N.  Edge (a, b) means a transmits to
// b, i.e. a is an in-neighbor of b.  Self-loops are not stored: every
// node's neighborhood implicitly includes itself.
class DiGraph {
public:
    explicit DiGraph(int node_count);

    int node_count() const { return n_; }
    void add_edge(int from, int to);
    bool has_edge(int from, int to) const;

    // In-neighbors of i (nodes transmitting to i), ascending, excluding i.
    const std::vector<int>& in_neighbors(int i) const;
    // Out-neighbors of i, ascending, excluding i.
    const std::vector<int>& out_neighbors(int i) const;
    // In-neighbors plus the node itself, ascending.
    std::vector<int> neighborhood(int i) const;

    bool is_strongly_connected() const;

    // BFS tree along transmission direction (root -> children), neighbors
    // explored in ascending order.  Throws NotStronglyConnected if some
    // node is unreachable from the root.
    SpanningTree spanning_tree_rooted_at(int root) const;

    std::vector<std::pair<int, int>> edges() const;

private:
    void check_node(int i) const;

    int n_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
};

}  // namespace distfobs
