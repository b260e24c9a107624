#pragma once

#include <string>
#include <vector>

#include "distfobs/numkit.hpp"

namespace distfobs {

// Recorded run: true function value psi[k], every node's estimate and its
// error norm, for k = 0..K.  Values are stored as doubles (the high
// precision engine rounds when recording; error norms are computed before
// rounding).
struct SimulationTrace {
    int function_count = 0;  // r
    int node_count = 0;
    int precision_bits = 53;              // arithmetic the run used
    std::vector<Vector> psi;              // per step
    std::vector<std::vector<Vector>> psi_hat;   // [step][node]
    std::vector<std::vector<double>> err_norm;  // [step][node]

    int steps() const { return static_cast<int>(psi.size()) - 1; }
};

// CSV layout: header `k,psi_1..psi_r,node,psihat_1..psihat_r,err_norm`,
// one row per (step, node), steps ascending then nodes ascending, doubles
// printed with 17 significant digits.  Byte-deterministic.
std::string trace_to_csv(const SimulationTrace& t);
void write_trace_csv(const SimulationTrace& t, const std::string& path);

SimulationTrace parse_trace_csv(const std::string& text);
SimulationTrace load_trace_csv(const std::string& path);

}  // namespace distfobs
