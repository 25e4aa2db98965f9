#pragma once

#include <vector>

#include "npns/grid.hpp"

namespace npns {

// Manufactured-solution sweep for the Poisson solve: psi* = cos(pi x/Lx)
// cos(pi y/Ly) on the unit square, rho = 2 pi^2 psi*, eta from the trace.
// One L2 error per grid size; second order means error ratios near 4.
struct MmsErrors {
    std::vector<int> grids;
    std::vector<double> errors;
    std::vector<double> ratios() const;
};

MmsErrors poisson_mms(double varsigma, const std::vector<int>& grids,
                      double tol = 1e-12);

// Max-norm gradient error against the analytic derivative of the same
// manufactured field (Neumann data supplied exactly).
MmsErrors gradient_mms(const std::vector<int>& grids);

// Interior-cell L2 error of div(grad psi*) against -2 pi^2 psi*; the first
// cell layer is excluded where the one-sided flux closure drops to first
// order locally.
MmsErrors divergence_mms(const std::vector<int>& grids);

}  // namespace npns
