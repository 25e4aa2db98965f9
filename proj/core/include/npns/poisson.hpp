#pragma once

#include <vector>

#include "npns/detail/pcg.hpp"
#include "npns/grid.hpp"

namespace npns {

struct PoissonOptions {
    double tol = 1e-10;   // residual target: ||-Lap_h psi - rho||_2 <= tol*||rho||_2
    int max_iter = 0;     // 0 picks a grid-size-based default
    bool project_incompatible = false;  // subtract the mean defect instead of rejecting
};

// -Lap psi = rho with d_n psi + varsigma*psi = eta on the walls.
// varsigma = 0 is the pure Neumann case: data must be compatible
// (sum rho dx + sum eta dS = 0) and the solution is mean-zero gauged.
class PoissonSolver {
public:
    PoissonSolver(const Grid& grid, double varsigma, BoundaryValues eta,
                  PoissonOptions opt = {});

    ScalarField solve(const ScalarField& rho);

    // homogeneous operator y = -div(grad_0 x), exposed for tests
    void apply(const std::vector<double>& x, std::vector<double>& y) const;

    const Grid& grid() const { return grid_; }
    double varsigma() const { return varsigma_; }
    BoundaryRule boundary_rule() const;

    int last_iterations() const { return last_iterations_; }
    double last_residual() const { return last_residual_; }

    // solvability defect of pure-Neumann data (sign: int rho + int eta)
    static double compatibility_defect(const ScalarField& rho,
                                       const BoundaryValues& eta, const Grid& g);

private:
    Grid grid_;
    double varsigma_;
    BoundaryValues eta_;
    PoissonOptions opt_;
    std::vector<double> diag_inv_;
    std::vector<double> rhs_eta_;   // div of the eta-part of the gradient
    ScalarField warm_;
    detail::PcgScratch scratch_;
    int last_iterations_ = 0;
    double last_residual_ = 0.0;
};

/// One-shot convenience wrapper around PoissonSolver.
ScalarField solve_poisson(const ScalarField& rho, const BoundaryValues& eta,
                          double varsigma, double tol = 1e-10);

/// E = -grad(psi) under the same boundary rule used in the solve.
VectorField electric_field(const ScalarField& psi, const BoundaryRule& bc);

// Potential/charge bundle carried by the simulation state.
struct ElectroState {
    ScalarField psi;
    ScalarField rho;
    BoundaryValues eta;
    double varsigma = 1.0;
};

}  // namespace npns
