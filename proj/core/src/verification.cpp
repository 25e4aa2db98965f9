#include "npns/verification.hpp"

#include <cmath>

#include "npns/poisson.hpp"

namespace npns {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

ScalarField exact_psi(const Grid& g) {
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f(i, j) = std::cos(kPi * g.xc(i)) * std::cos(kPi * g.yc(j));
    return f;
}

// Robin/Neumann trace of the manufactured solution: eta = d_n psi + s psi.
// The normal derivative vanishes on the unit-square walls for this field.
BoundaryValues exact_eta(const Grid& g, double varsigma) {
    BoundaryValues eta(g);
    for (int j = 0; j < g.ny; ++j) {
        eta.left[j] = varsigma * std::cos(0.0) * std::cos(kPi * g.yc(j));
        eta.right[j] = varsigma * std::cos(kPi) * std::cos(kPi * g.yc(j));
    }
    for (int i = 0; i < g.nx; ++i) {
        eta.bottom[i] = varsigma * std::cos(kPi * g.xc(i)) * std::cos(0.0);
        eta.top[i] = varsigma * std::cos(kPi * g.xc(i)) * std::cos(kPi);
    }
    return eta;
}

}  // namespace

std::vector<double> MmsErrors::ratios() const {
    std::vector<double> r;
    for (size_t k = 0; k + 1 < errors.size(); ++k)
        r.push_back(errors[k] / errors[k + 1]);
    return r;
}

MmsErrors poisson_mms(double varsigma, const std::vector<int>& grids, double tol) {
    MmsErrors out;
    out.grids = grids;
    for (int n : grids) {
        const Grid g(n, n, 1.0, 1.0);
        const ScalarField psi_star = exact_psi(g);
        ScalarField rho(g);
        for (size_t k = 0; k < rho.v.size(); ++k)
            rho.v[k] = 2.0 * kPi * kPi * psi_star.v[k];
        PoissonOptions opt;
        opt.tol = tol;
        PoissonSolver solver(g, varsigma, exact_eta(g, varsigma), opt);
        const ScalarField psi = solver.solve(rho);
        ScalarField err = psi;
        for (size_t k = 0; k < err.v.size(); ++k) err.v[k] -= psi_star.v[k];
        out.errors.push_back(std::sqrt(l2_norm_sq(err)));
    }
    return out;
}

MmsErrors gradient_mms(const std::vector<int>& grids) {
    MmsErrors out;
    out.grids = grids;
    for (int n : grids) {
        const Grid g(n, n, 1.0, 1.0);
        const ScalarField f = exact_psi(g);
        const VectorField grad = gradient(f, BoundaryRule::neumann(g, 0.0));
        double worst = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) {
                const double exact =
                    -kPi * std::sin(kPi * i * g.hx()) * std::cos(kPi * g.yc(j));
                worst = std::max(worst, std::abs(grad.x(i, j) - exact));
            }
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double exact =
                    -kPi * std::cos(kPi * g.xc(i)) * std::sin(kPi * j * g.hy());
                worst = std::max(worst, std::abs(grad.y(i, j) - exact));
            }
        out.errors.push_back(worst);
    }
    return out;
}

MmsErrors divergence_mms(const std::vector<int>& grids) {
    MmsErrors out;
    out.grids = grids;
    for (int n : grids) {
        const Grid g(n, n, 1.0, 1.0);
        const ScalarField f = exact_psi(g);
        const ScalarField lap = divergence(gradient(f, BoundaryRule::neumann(g, 0.0)));
        double s = 0.0;
        int count = 0;
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) {
                const double exact = -2.0 * kPi * kPi * f(i, j);
                const double d = lap(i, j) - exact;
                s += d * d;
                ++count;
            }
        out.errors.push_back(std::sqrt(s / count));
    }
    return out;
}

}  // namespace npns
