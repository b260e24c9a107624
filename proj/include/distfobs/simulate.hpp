#pragma once

#include "distfobs/analysis.hpp"
#include "distfobs/trace.hpp"

namespace distfobs {

// Working precision for a horizon-K run: enough bits that the recursion
// keeps double-equivalent relative accuracy even when the plant grows like
// rho(A)^k.  Plain double (53) when the plant does not grow.
long auto_precision_bits(const Matrix& A, long horizon);

// Execute the full pipeline (validate, select leaders, decompose, design)
// and run the synchronous network simulation for `horizon` steps, recording
// psi, every node's psi-hat and error norm at k = 0..horizon.
SimulationTrace run_simulate(const Scenario& sc);

}  // namespace distfobs
