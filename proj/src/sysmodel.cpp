#include "distfobs/sysmodel.hpp"

#include <algorithm>

namespace distfobs {

Matrix SystemModel::full_C() const {
    return vstack(sensors);
}

RowSelection RowSelection::all_rows(const SystemModel& m,
                                    const std::set<int>& nodes) {
    RowSelection sel;
    for (int i : nodes) {
        if (i < 1 || i > m.node_count())
            throw InvalidNode("RowSelection: node " + std::to_string(i));
        const auto rows_i = m.sensors[static_cast<size_t>(i - 1)].rows();
        std::vector<int> r(static_cast<size_t>(rows_i));
        for (Eigen::Index j = 0; j < rows_i; ++j)
            r[static_cast<size_t>(j)] = static_cast<int>(j) + 1;
        sel.rows[i] = std::move(r);
    }
    return sel;
}

int RowSelection::total_rows() const {
    int t = 0;
    for (const auto& [node, r] : rows) t += static_cast<int>(r.size());
    return t;
}

std::vector<std::pair<int, int>> RowSelection::flattened() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [node, r] : rows)
        for (int idx : r) out.emplace_back(node, idx);
    return out;
}

ValidationReport validate(const SystemModel& m, const ToleranceConfig& tol) {
    ValidationReport rep;
    auto bad = [&rep](std::string msg) { rep.problems.push_back(std::move(msg)); };

    if (m.A.rows() != m.A.cols()) bad("A is not square");
    const auto n = m.A.cols();
    if (n < 1) bad("state dimension must be at least 1");
    if (!has_finite_entries(m.A)) bad("A has non-finite entries");

    if (static_cast<int>(m.sensors.size()) != m.graph.node_count())
        bad("sensor count does not match node count");
    for (size_t i = 0; i < m.sensors.size(); ++i) {
        const auto& C = m.sensors[i];
        if (C.rows() > 0 && C.cols() != n)
            bad("C_" + std::to_string(i + 1) + " has wrong column count");
        if (!has_finite_entries(C))
            bad("C_" + std::to_string(i + 1) + " has non-finite entries");
    }

    if (m.L.rows() < 1) bad("L must have at least one row");
    if (m.L.cols() != n) bad("L has wrong column count");
    if (!has_finite_entries(m.L)) bad("L has non-finite entries");
    if (m.L.rows() >= 1 && m.L.cols() == n &&
        numerical_rank(m.L, tol) != m.L.rows())
        bad("L is not full row rank");

    if (!(tol.rank_tol >= 0.0)) bad("rank_tol must be non-negative");
    if (!(tol.stability_margin > 0.0)) bad("stability_margin must be positive");
    if (!(tol.residual_tol > 0.0)) bad("residual_tol must be positive");

    if (!m.graph.is_strongly_connected())
        bad("communication graph is not strongly connected");

    return rep;
}

Matrix stacked_C(const SystemModel& m, const std::set<int>& nodes,
                 const RowSelection& sel) {
    if (nodes.empty()) throw EmptySelection("stacked_C: empty node set");
    std::vector<Matrix> parts;
    for (int i : nodes) {
        if (i < 1 || i > m.node_count())
            throw InvalidNode("stacked_C: node " + std::to_string(i));
        const Matrix& C = m.sensors[static_cast<size_t>(i - 1)];
        auto it = sel.rows.find(i);
        if (it == sel.rows.end()) continue;
        int prev = 0;
        for (int ridx : it->second) {
            if (ridx <= prev)
                throw ValidationError("stacked_C: row indices for node " +
                                      std::to_string(i) +
                                      " must be strictly increasing");
            if (ridx < 1 || ridx > C.rows())
                throw ValidationError("stacked_C: row " + std::to_string(ridx) +
                                      " out of range for node " +
                                      std::to_string(i));
            parts.push_back(C.row(ridx - 1));
            prev = ridx;
        }
    }
    if (parts.empty()) return Matrix::Zero(0, m.state_dim());
    return vstack(parts);
}

Matrix stacked_C(const SystemModel& m, const std::set<int>& nodes) {
    return stacked_C(m, nodes, RowSelection::all_rows(m, nodes));
}

}  // namespace distfobs
