#include "npns/fluid.hpp"

#include <algorithm>
#include <cmath>

namespace npns {

VectorField coulomb_force(const ScalarField& rho, const ScalarField& psi, double kappa) {
    if (rho.grid != psi.grid)
        throw StructuralError("coulomb_force: fields live on different grids");
    const Grid& g = rho.grid;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    VectorField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            f.x(i, j) = -kappa * 0.5 * (rho(i - 1, j) + rho(i, j)) *
                        (psi(i, j) - psi(i - 1, j)) * ihx;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.y(i, j) = -kappa * 0.5 * (rho(i, j - 1) + rho(i, j)) *
                        (psi(i, j) - psi(i, j - 1)) * ihy;
    return f;
}

VectorField advect(const VectorField& u, double phi_factor) {
    const Grid& g = u.grid;
    if (!u.boundary_faces_zero())
        throw StructuralError("advect: velocity boundary faces must be zero");
    const int nx = g.nx, ny = g.ny;
    const double i2hx = 0.5 / g.hx(), i2hy = 0.5 / g.hy();
    VectorField a(g);

    // Skew form S = (divergence form + convective form)/2 reduces to
    //   S_i = [w_{i+1/2} phi_{i+1} - w_{i-1/2} phi_{i-1}] / (2h)
    // per direction. The x-sweep telescopes against the Dirichlet zeros at
    // i = 0, nx; the y-sweep against w = 0 at wall corners, so <S u, u> = 0
    // up to rounding.
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double wc_e = 0.5 * (u.x(i, j) + u.x(i + 1, j));      // cell (i, j)
            const double wc_w = 0.5 * (u.x(i - 1, j) + u.x(i, j));      // cell (i-1, j)
            double acc = (wc_e * u.x(i + 1, j) - wc_w * u.x(i - 1, j)) * i2hx;
            if (j + 1 < ny) {
                const double wn = 0.5 * (u.y(i - 1, j + 1) + u.y(i, j + 1));
                acc += wn * u.x(i, j + 1) * i2hy;
            }
            if (j > 0) {
                const double ws = 0.5 * (u.y(i - 1, j) + u.y(i, j));
                acc -= ws * u.x(i, j - 1) * i2hy;
            }
            a.x(i, j) = phi_factor * acc;
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double wc_n = 0.5 * (u.y(i, j) + u.y(i, j + 1));      // cell (i, j)
            const double wc_s = 0.5 * (u.y(i, j - 1) + u.y(i, j));      // cell (i, j-1)
            double acc = (wc_n * u.y(i, j + 1) - wc_s * u.y(i, j - 1)) * i2hy;
            if (i + 1 < nx) {
                const double we = 0.5 * (u.x(i + 1, j - 1) + u.x(i + 1, j));
                acc += we * u.y(i + 1, j) * i2hx;
            }
            if (i > 0) {
                const double ww = 0.5 * (u.x(i, j - 1) + u.x(i, j));
                acc -= ww * u.y(i - 1, j) * i2hx;
            }
            a.y(i, j) = phi_factor * acc;
        }
    return a;
}

VelocitySolvers::VelocitySolvers(const Grid& grid, double pressure_tol, double viscous_tol)
    : grid_(grid),
      viscous_tol_(viscous_tol),
      pressure_(grid, 0.0, BoundaryValues(grid, 0.0),
                PoissonOptions{pressure_tol, 0, true}) {}

void VelocitySolvers::build_viscous_diag(double nu) {
    if (nu == nu_cached_) return;
    nu_cached_ = nu;
    const int nx = grid_.nx, ny = grid_.ny;
    const double ihx2 = 1.0 / (grid_.hx() * grid_.hx());
    const double ihy2 = 1.0 / (grid_.hy() * grid_.hy());

    diag_inv_x_.assign(static_cast<size_t>(grid_.xfaces()), 1.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double wall = (j == 0 || j == ny - 1) ? ihy2 : 0.0;
            diag_inv_x_[grid_.xface(i, j)] =
                1.0 / (1.0 + nu * (2.0 * ihx2 + 2.0 * ihy2 + wall));
        }
    diag_inv_y_.assign(static_cast<size_t>(grid_.yfaces()), 1.0);
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double wall = (i == 0 || i == nx - 1) ? ihx2 : 0.0;
            diag_inv_y_[grid_.yface(i, j)] =
                1.0 / (1.0 + nu * (2.0 * ihx2 + 2.0 * ihy2 + wall));
        }
}

void VelocitySolvers::viscous_solve(VectorField& u, double nu) {
    if (u.grid != grid_)
        throw StructuralError("viscous_solve: grid mismatch");
    if (nu == 0.0) return;
    build_viscous_diag(nu);

    const int nx = grid_.nx, ny = grid_.ny;
    const double ihx2 = 1.0 / (grid_.hx() * grid_.hx());
    const double ihy2 = 1.0 / (grid_.hy() * grid_.hy());

    // x-component: DOFs at interior x-faces; boundary entries stay zero and
    // are read as Dirichlet values. Wall rows use the mirror ghost -u.
    auto apply_x = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i <= nx; ++i) {
                const int k = grid_.xface(i, j);
                if (i == 0 || i == nx) {
                    out[k] = in[k];
                    continue;
                }
                const double c = in[k];
                double lap = (2.0 * c - in[k - 1] - in[k + 1]) * ihx2;
                const double south = (j > 0) ? in[grid_.xface(i, j - 1)] : -c;
                const double north = (j < ny - 1) ? in[grid_.xface(i, j + 1)] : -c;
                lap += (2.0 * c - south - north) * ihy2;
                out[k] = c + nu * lap;
            }
    };
    auto apply_y = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int k = grid_.yface(i, j);
                if (j == 0 || j == ny) {
                    out[k] = in[k];
                    continue;
                }
                const double c = in[k];
                double lap = (2.0 * c - in[k - nx] - in[k + nx]) * ihy2;
                const double west = (i > 0) ? in[grid_.yface(i - 1, j)] : -c;
                const double east = (i < nx - 1) ? in[grid_.yface(i + 1, j)] : -c;
                lap += (2.0 * c - west - east) * ihx2;
                out[k] = c + nu * lap;
            }
    };

    auto run = [&](auto&& apply, std::vector<double>& x,
                   const std::vector<double>& dinv, const char* what) {
        rhs_ = x;
        double bn = 0.0;
        for (double v : rhs_) bn += v * v;
        bn = std::sqrt(bn);
        if (bn == 0.0) return;
        const int max_iter = 20 * std::max(grid_.nx, grid_.ny) + 100;
        const auto res = detail::pcg(apply, dinv, rhs_, x, viscous_tol_ * bn,
                                     max_iter, scratch_);
        if (!res.converged)
            throw SolverError(std::string("viscous_solve: PCG stalled on ") + what,
                              res.history);
    };
    run(apply_x, u.ux, diag_inv_x_, "u_x");
    run(apply_y, u.uy, diag_inv_y_, "u_y");
}

std::pair<VectorField, ScalarField> VelocitySolvers::project(const VectorField& v) {
    VectorField out = v;
    ScalarField q(grid_);
    project_in_place(out, q);
    return {std::move(out), std::move(q)};
}

void VelocitySolvers::project_in_place(VectorField& v, ScalarField& q) {
    if (v.grid != grid_)
        throw StructuralError("project: grid mismatch");
    if (!v.boundary_faces_zero())
        throw StructuralError("project: input must have zero boundary faces");
    const ScalarField div = divergence(v);
    q = pressure_.solve(div);
    const VectorField gq = gradient(q, BoundaryRule::neumann(grid_, 0.0));
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 1; i < grid_.nx; ++i)
            v.x(i, j) -= gq.x(i, j);
    for (int j = 1; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i)
            v.y(i, j) -= gq.y(i, j);
}

void step_velocity(FluidState& st, const VectorField& force,
                   const VectorField& noise_increment, double dt,
                   VelocitySolvers& solvers, double phi_adv) {
    if (!(dt > 0.0)) throw DomainError("step_velocity: dt must be positive");
    const Grid& g = st.u.grid;
    if (force.grid != g || noise_increment.grid != g)
        throw StructuralError("step_velocity: grid mismatch");

    const VectorField adv = advect(st.u, phi_adv);
    for (size_t k = 0; k < st.u.ux.size(); ++k)
        st.u.ux[k] += dt * (force.ux[k] - adv.ux[k]) + noise_increment.ux[k];
    for (size_t k = 0; k < st.u.uy.size(); ++k)
        st.u.uy[k] += dt * (force.uy[k] - adv.uy[k]) + noise_increment.uy[k];
    st.u.zero_boundary_faces();

    solvers.viscous_solve(st.u, dt * st.mu);
    solvers.project_in_place(st.u, st.p);
}

}  // namespace npns
