#pragma once

#include <memory>
#include <utility>

#include "npns/detail/pcg.hpp"
#include "npns/grid.hpp"
#include "npns/poisson.hpp"

namespace npns {

struct FluidState {
    VectorField u;       // no-slip: boundary faces identically zero
    ScalarField p;       // projection multiplier, defined up to a constant
    double mu = 1.0;     // viscosity
    double kappa = 1.0;  // Coulomb coupling
};

// Face-interpolated -kappa * rho * grad(psi); boundary faces are zero
// (the velocity space has no wall degrees of freedom).
VectorField coulomb_force(const ScalarField& rho, const ScalarField& psi, double kappa);

// Skew-symmetric (divergence + convective average) advection of u by itself.
// <advect(u), u> vanishes to rounding for no-slip u; see the wall telescoping
// in the implementation. `phi_factor` is the cut-off prefactor.
VectorField advect(const VectorField& u, double phi_factor = 1.0);

// Scratch-holding solver bundle for one trajectory (not thread-shared).
class VelocitySolvers {
public:
    explicit VelocitySolvers(const Grid& grid, double pressure_tol = 1e-12,
                             double viscous_tol = 1e-12);

    // (I - nu Lap_h) u = rhs componentwise, Dirichlet walls; in place
    void viscous_solve(VectorField& u, double nu);

    // Helmholtz-Leray projection: v - grad(q) with Lap_h q = div v, d_n q = 0
    std::pair<VectorField, ScalarField> project(const VectorField& v);
    void project_in_place(VectorField& v, ScalarField& q);

private:
    Grid grid_;
    double viscous_tol_;
    PoissonSolver pressure_;
    detail::PcgScratch scratch_;
    std::vector<double> rhs_, sol_, diag_inv_x_, diag_inv_y_;
    double nu_cached_ = -1.0;
    void build_viscous_diag(double nu);
};

// One Euler-Maruyama velocity update:
//   u* = u + dt(force - advect(u)) + noise_increment, then implicit viscosity,
//   then pressure projection. noise_increment is pre-scaled by the Wiener
//   increments and enters before the projection.
void step_velocity(FluidState& st, const VectorField& force,
                   const VectorField& noise_increment, double dt,
                   VelocitySolvers& solvers, double phi_adv = 1.0);

}  // namespace npns
