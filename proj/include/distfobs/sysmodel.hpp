#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "distfobs/graphkit.hpp"
#include "distfobs/numkit.hpp"

namespace distfobs {

// Discrete-time plant x[k+1] = A x[k] observed through a network of N
// sensor nodes, node i measuring y_i = C_i x (C_i may have zero rows), with
// the goal of every node estimating the function psi = L x.
struct SystemModel {
    Matrix A;                     // n x n
    std::vector<Matrix> sensors;  // C_i, each r_i x n, one per node
    Matrix L;                     // r x n, full row rank
    DiGraph graph;                // N nodes, 1-based

    int state_dim() const { return static_cast<int>(A.rows()); }
    int node_count() const { return graph.node_count(); }
    int function_count() const { return static_cast<int>(L.rows()); }

    // All sensor rows stacked in node order.
    Matrix full_C() const;
};

// Which measurement rows of which nodes participate in a candidate leader
// set.  Row indices are 1-based within each node's C_i and strictly
// increasing.
struct RowSelection {
    std::map<int, std::vector<int>> rows;

    static RowSelection all_rows(const SystemModel& m, const std::set<int>& nodes);

    int total_rows() const;
    bool empty() const { return total_rows() == 0; }

    // Flattened (node, row) pairs in node order — the canonical form used
    // for lexicographic tie-breaking.
    std::vector<std::pair<int, int>> flattened() const;
};

struct ValidationReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

// Structural checks: square A, consistent column counts, full-row-rank L,
// strong connectivity, finite entries, positive tolerances.
ValidationReport validate(const SystemModel& m, const ToleranceConfig& tol = {});

// Stack the selected rows, grouped by node in ascending node order.
// Throws EmptySelection for an empty node set, InvalidNode /
// ValidationError on out-of-range indices.
Matrix stacked_C(const SystemModel& m, const std::set<int>& nodes,
                 const RowSelection& sel);
// Convenience: all rows of the given nodes.
Matrix stacked_C(const SystemModel& m, const std::set<int>& nodes);

}  // namespace distfobs
