#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "npns/poisson.hpp"
#include "npns/rng.hpp"
#include "npns/sampling.hpp"
#include "npns/verification.hpp"

using namespace npns;

TEST_CASE("zero data gives the zero potential") {
    const Grid g(16, 16, 1.0, 1.0);
    const ScalarField psi = solve_poisson(ScalarField(g), BoundaryValues(g, 0.0), 1.0);
    CHECK(max_norm(psi) == 0.0);
}

TEST_CASE("manufactured solution: second order for Robin and Neumann") {
    for (double varsigma : {1.0, 0.0}) {
        const auto mms = poisson_mms(varsigma, {16, 32, 64});
        for (double r : mms.ratios()) CHECK(r >= 3.7);
    }
}

TEST_CASE("Neumann compatibility is enforced") {
    const Grid g(16, 16, 1.0, 1.0);
    ScalarField rho(g, 1.0);
    SUBCASE("compatible data solves") {
        // int rho = 1 balances int eta dS = -1
        const ScalarField psi = solve_poisson(rho, BoundaryValues(g, -0.25), 0.0);
        CHECK(psi.all_finite());
        CHECK(cell_sum(psi) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("incompatible data is rejected with the defect value") {
        try {
            solve_poisson(rho, BoundaryValues(g, 0.0), 0.0);
            FAIL("expected CompatibilityError");
        } catch (const CompatibilityError& e) {
            CHECK(e.defect == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("projection flag subtracts the mean defect") {
        PoissonOptions opt;
        opt.project_incompatible = true;
        PoissonSolver solver(g, 0.0, BoundaryValues(g, 0.0), opt);
        const ScalarField psi = solver.solve(rho);
        CHECK(psi.all_finite());
    }
}

TEST_CASE("solver residual meets the advertised tolerance") {
    const Grid g(32, 32, 1.0, 1.0);
    const CounterRng rng(11, 0);
    const ScalarField rho = random_smooth_scalar(g, rng, 0, 5, 3.0);
    PoissonOptions opt;
    opt.tol = 1e-10;
    PoissonSolver solver(g, 1.0, BoundaryValues(g, 0.0), opt);
    const ScalarField psi = solver.solve(rho);
    std::vector<double> Ax(psi.v.size());
    solver.apply(psi.v, Ax);
    double r2 = 0.0, ref = 0.0;
    for (size_t k = 0; k < Ax.size(); ++k) {
        const double r = rho.v[k] - Ax[k];
        r2 += r * r;
        ref += rho.v[k] * rho.v[k];
    }
    CHECK(std::sqrt(r2) <= 1e-10 * std::sqrt(ref));
}

TEST_CASE("operator is symmetric positive definite") {
    const Grid g(10, 8, 1.0, 1.3);
    const CounterRng rng(31, 0);
    for (double varsigma : {1.0, 0.0}) {
        PoissonSolver solver(g, varsigma, BoundaryValues(g, 0.0));
        const ScalarField x = random_smooth_scalar(g, rng, 1, 3, 1.0);
        const ScalarField y = random_smooth_scalar(g, rng, 2, 3, 1.0);
        std::vector<double> Ax(x.v.size()), Ay(y.v.size());
        solver.apply(x.v, Ax);
        solver.apply(y.v, Ay);
        double xAy = 0.0, yAx = 0.0, xAx = 0.0;
        for (size_t k = 0; k < Ax.size(); ++k) {
            xAy += x.v[k] * Ay[k];
            yAx += y.v[k] * Ax[k];
            xAx += x.v[k] * Ax[k];
        }
        CHECK(xAy == doctest::Approx(yAx).epsilon(1e-12));
        CHECK(xAx >= -1e-12);
    }
}

TEST_CASE("CG energy-norm error decreases monotonically") {
    // the CG theorem is monotone decrease of the A-norm of the error;
    // track it against a tightly converged reference solution
    const Grid g(24, 24, 1.0, 1.0);
    const CounterRng rng(7, 0);
    const ScalarField rho = random_smooth_scalar(g, rng, 0, 4, 1.0);
    PoissonOptions tight;
    tight.tol = 1e-13;
    PoissonSolver ref_solver(g, 1.0, BoundaryValues(g, 0.0), tight);
    const ScalarField ref = ref_solver.solve(rho);

    PoissonSolver probe(g, 1.0, BoundaryValues(g, 0.0));
    double prev = 1e300;
    for (double tol : {1e-2, 1e-4, 1e-6, 1e-8}) {
        PoissonOptions opt;
        opt.tol = tol;
        PoissonSolver s(g, 1.0, BoundaryValues(g, 0.0), opt);
        const ScalarField psi = s.solve(rho);
        std::vector<double> e(psi.v.size()), Ae(psi.v.size());
        for (size_t k = 0; k < e.size(); ++k) e[k] = psi.v[k] - ref.v[k];
        probe.apply(e, Ae);
        double a_norm = 0.0;
        for (size_t k = 0; k < e.size(); ++k) a_norm += e[k] * Ae[k];
        CHECK(a_norm <= prev * (1.0 + 1e-12));
        prev = a_norm;
    }
}

TEST_CASE("solver is linear in the data") {
    const Grid g(16, 16, 1.0, 1.0);
    const CounterRng rng(13, 0);
    const ScalarField r1 = random_smooth_scalar(g, rng, 0, 4, 1.0);
    const ScalarField r2 = random_smooth_scalar(g, rng, 1, 4, 1.0);
    BoundaryValues e1(g, 0.3), e2(g, -0.1);
    const double a = 2.0, b = -0.5;

    ScalarField rc(g);
    BoundaryValues ec(g);
    for (size_t k = 0; k < rc.v.size(); ++k) rc.v[k] = a * r1.v[k] + b * r2.v[k];
    for (int j = 0; j < g.ny; ++j) {
        ec.left[j] = a * e1.left[j] + b * e2.left[j];
        ec.right[j] = a * e1.right[j] + b * e2.right[j];
    }
    for (int i = 0; i < g.nx; ++i) {
        ec.bottom[i] = a * e1.bottom[i] + b * e2.bottom[i];
        ec.top[i] = a * e1.top[i] + b * e2.top[i];
    }
    const ScalarField s1 = solve_poisson(r1, e1, 1.0, 1e-12);
    const ScalarField s2 = solve_poisson(r2, e2, 1.0, 1e-12);
    const ScalarField sc = solve_poisson(rc, ec, 1.0, 1e-12);
    double worst = 0.0;
    for (size_t k = 0; k < sc.v.size(); ++k)
        worst = std::max(worst, std::abs(sc.v[k] - a * s1.v[k] - b * s2.v[k]));
    CHECK(worst <= 1e-9);
}

TEST_CASE("Neumann gauge: mean-zero representative, E unchanged by constants") {
    const Grid g(16, 16, 1.0, 1.0);
    const CounterRng rng(19, 0);
    ScalarField rho = random_smooth_scalar(g, rng, 0, 4, 1.0);
    // make the data compatible with eta = 0
    const double mean = cell_sum(rho) / (g.Lx * g.Ly);
    for (double& v : rho.v) v -= mean;
    const ScalarField psi = solve_poisson(rho, BoundaryValues(g, 0.0), 0.0);
    CHECK(cell_sum(psi) == doctest::Approx(0.0).epsilon(1e-12));

    ScalarField shifted = psi;
    for (double& v : shifted.v) v += 3.25;
    const BoundaryRule bc = BoundaryRule::neumann(g, 0.0);
    const VectorField e1 = electric_field(psi, bc);
    const VectorField e2 = electric_field(shifted, bc);
    double worst = 0.0;
    for (size_t k = 0; k < e1.ux.size(); ++k)
        worst = std::max(worst, std::abs(e1.ux[k] - e2.ux[k]));
    for (size_t k = 0; k < e1.uy.size(); ++k)
        worst = std::max(worst, std::abs(e1.uy[k] - e2.uy[k]));
    CHECK(worst <= 1e-11);
}

TEST_CASE("electric field examples") {
    const Grid g(12, 12, 1.0, 1.0);
    SUBCASE("constant potential") {
        ScalarField psi(g, 4.0);
        CHECK(max_norm(electric_field(psi, BoundaryRule::neumann(g, 0.0))) == 0.0);
    }
    SUBCASE("psi = x gives E_x = -1") {
        ScalarField psi(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) psi(i, j) = g.xc(i);
        BoundaryValues data(g, 0.0);
        for (int j = 0; j < g.ny; ++j) {
            data.left[j] = -1.0;
            data.right[j] = 1.0;
        }
        const VectorField e = electric_field(psi, BoundaryRule::neumann(std::move(data)));
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i)
                CHECK(e.x(i, j) == doctest::Approx(-1.0).epsilon(1e-13));
    }
}
