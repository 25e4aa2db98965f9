#include "npns/poisson.hpp"

#include <algorithm>
#include <cmath>

namespace npns {

namespace {

// Robin boundary-face coupling: face gradient = beta * psi_interior (eta = 0).
inline double robin_beta(double varsigma, double h) {
    return 2.0 * varsigma / (2.0 + varsigma * h);
}

}  // namespace

PoissonSolver::PoissonSolver(const Grid& grid, double varsigma, BoundaryValues eta,
                             PoissonOptions opt)
    : grid_(grid), varsigma_(varsigma), eta_(std::move(eta)), opt_(opt), warm_(grid) {
    if (varsigma_ < 0.0)
        throw DomainError("PoissonSolver: varsigma must be >= 0");
    if (!eta_.matches(grid_))
        throw StructuralError("PoissonSolver: eta does not match the grid boundary");
    if (opt_.max_iter <= 0) opt_.max_iter = 80 * std::max(grid_.nx, grid_.ny) + 200;

    const int nx = grid_.nx, ny = grid_.ny;
    const double hx = grid_.hx(), hy = grid_.hy();
    const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);
    const double bx = robin_beta(varsigma_, hx) / hx;
    const double by = robin_beta(varsigma_, hy) / hy;

    diag_inv_.assign(static_cast<size_t>(grid_.cells()), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double d = 0.0;
            d += (i > 0) ? ihx2 : bx;
            d += (i < nx - 1) ? ihx2 : bx;
            d += (j > 0) ? ihy2 : by;
            d += (j < ny - 1) ? ihy2 : by;
            diag_inv_[grid_.cell(i, j)] = d > 0.0 ? 1.0 / d : 1.0;
        }

    // rhs contribution of the boundary datum: div of the eta-only gradient
    ScalarField zero(grid_);
    const VectorField g_eta = gradient(zero, boundary_rule());
    rhs_eta_ = divergence(g_eta).v;
}

BoundaryRule PoissonSolver::boundary_rule() const {
    return varsigma_ > 0.0 ? BoundaryRule::robin(varsigma_, eta_)
                           : BoundaryRule::neumann(eta_);
}

void PoissonSolver::apply(const std::vector<double>& x, std::vector<double>& y) const {
    const int nx = grid_.nx, ny = grid_.ny;
    const double hx = grid_.hx(), hy = grid_.hy();
    const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);
    const double bx = robin_beta(varsigma_, hx) / hx;
    const double by = robin_beta(varsigma_, hy) / hy;

    for (int j = 0; j < ny; ++j) {
        const int row = j * nx;
        for (int i = 0; i < nx; ++i) {
            const double c = x[row + i];
            double acc = 0.0;
            acc += (i > 0) ? (c - x[row + i - 1]) * ihx2 : bx * c;
            acc += (i < nx - 1) ? (c - x[row + i + 1]) * ihx2 : bx * c;
            acc += (j > 0) ? (c - x[row + i - nx]) * ihy2 : by * c;
            acc += (j < ny - 1) ? (c - x[row + i + nx]) * ihy2 : by * c;
            y[row + i] = acc;
        }
    }
}

double PoissonSolver::compatibility_defect(const ScalarField& rho,
                                           const BoundaryValues& eta, const Grid& g) {
    return cell_sum(rho) + boundary_integral(eta, g);
}

ScalarField PoissonSolver::solve(const ScalarField& rho) {
    if (rho.grid != grid_)
        throw StructuralError("solve_poisson: rho grid mismatch");

    const size_t n = rho.v.size();
    std::vector<double> rhs(n);
    for (size_t k = 0; k < n; ++k) rhs[k] = rho.v[k] + rhs_eta_[k];

    if (varsigma_ == 0.0) {
        const double defect = compatibility_defect(rho, eta_, grid_);
        const double scale = l1_norm(rho) + boundary_l1(eta_, grid_);
        if (std::abs(defect) > 1e-10 * scale && scale > 0.0) {
            if (!opt_.project_incompatible)
                throw CompatibilityError(
                    "solve_poisson: incompatible Neumann data, defect = " +
                        std::to_string(defect),
                    defect);
            const double shift = defect / (grid_.Lx * grid_.Ly);
            for (double& b : rhs) b -= shift;
        }
        // shave the rounding-level mean so CG stays in range(A)
        double mean = 0.0;
        for (double b : rhs) mean += b;
        mean /= static_cast<double>(n);
        for (double& b : rhs) b -= mean;
    }

    double ref = std::sqrt(l2_norm_sq(rho) / grid_.cell_area());  // vector 2-norm
    if (ref == 0.0) {
        double s = 0.0;
        for (double b : rhs) s += b * b;
        ref = std::sqrt(s);
    }
    if (ref == 0.0) {
        warm_.v.assign(n, 0.0);
        last_iterations_ = 0;
        last_residual_ = 0.0;
        return warm_;
    }

    std::vector<double>& x = warm_.v;
    auto op = [this](const std::vector<double>& in, std::vector<double>& out) {
        apply(in, out);
    };
    const auto res = detail::pcg(op, diag_inv_, rhs, x, opt_.tol * ref,
                                 opt_.max_iter, scratch_);
    last_iterations_ = res.iterations;
    last_residual_ = res.residual;
    if (!res.converged)
        throw SolverError("solve_poisson: PCG stalled at residual " +
                              std::to_string(res.residual),
                          res.history);

    if (varsigma_ == 0.0) {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(n);
        for (double& v : x) v -= mean;
    }
    return warm_;
}

ScalarField solve_poisson(const ScalarField& rho, const BoundaryValues& eta,
                          double varsigma, double tol) {
    PoissonOptions opt;
    opt.tol = tol;
    PoissonSolver solver(rho.grid, varsigma, eta, opt);
    return solver.solve(rho);
}

VectorField electric_field(const ScalarField& psi, const BoundaryRule& bc) {
    VectorField e = gradient(psi, bc);
    for (double& v : e.ux) v = -v;
    for (double& v : e.uy) v = -v;
    return e;
}

}  // namespace npns
