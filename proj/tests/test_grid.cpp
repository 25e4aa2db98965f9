#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "npns/field_io.hpp"
#include "npns/grid.hpp"
#include "npns/rng.hpp"
#include "npns/sampling.hpp"
#include "npns/verification.hpp"

using namespace npns;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid(3, 8, 1.0, 1.0), StructuralError);
    CHECK_THROWS_AS(Grid(8, 8, 0.0, 1.0), StructuralError);
    const Grid g(8, 6, 2.0, 3.0);
    CHECK(g.hx() == doctest::Approx(0.25));
    CHECK(g.hy() == doctest::Approx(0.5));
    CHECK(ScalarField(g).v.size() == 48);
    CHECK(VectorField(g).ux.size() == 9 * 6);
    CHECK(VectorField(g).uy.size() == 8 * 7);
}

TEST_CASE("gradient of a constant field is zero") {
    const Grid g(16, 16, 1.0, 1.0);
    ScalarField f(g, 7.0);
    const VectorField grad = gradient(f, BoundaryRule::neumann(g, 0.0));
    CHECK(max_norm(grad) == 0.0);
}

TEST_CASE("gradient of f = x with exact Neumann data is identically (1, 0)") {
    const Grid g(16, 12, 1.0, 1.0);
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f(i, j) = g.xc(i);
    // outward normal derivative: -1 on the left wall, +1 on the right
    BoundaryValues data(g, 0.0);
    for (int j = 0; j < g.ny; ++j) {
        data.left[j] = -1.0;
        data.right[j] = 1.0;
    }
    const VectorField grad = gradient(f, BoundaryRule::neumann(std::move(data)));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            CHECK(grad.x(i, j) == doctest::Approx(1.0).epsilon(1e-13));
    for (double v : grad.uy) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("gradient converges at second order on cos(pi x)cos(pi y)") {
    const auto mms = gradient_mms({16, 32, 64});
    for (double r : mms.ratios()) CHECK(r >= 3.7);
}

TEST_CASE("divergence basics") {
    const Grid g(8, 8, 1.0, 1.0);
    SUBCASE("zero field") {
        CHECK(max_norm(divergence(VectorField(g))) == 0.0);
    }
    SUBCASE("constant interior flux telescopes to zero") {
        VectorField v(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) v.x(i, j) = 1.0;
        const ScalarField d = divergence(v);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx - 1; ++i) CHECK(d(i, j) == 0.0);
    }
}

TEST_CASE("divergence of the discrete gradient approximates the Laplacian") {
    const auto mms = divergence_mms({16, 32, 64});
    for (double r : mms.ratios()) CHECK(r >= 3.6);
}

TEST_CASE("discrete divergence theorem holds to rounding") {
    const Grid g(12, 10, 1.5, 0.8);
    const CounterRng rng(17, 0);
    for (uint64_t s = 0; s < 10; ++s) {
        VectorField v(g);
        for (size_t k = 0; k < v.ux.size(); ++k)
            v.ux[k] = 2.0 * rng.uniform(s, static_cast<uint32_t>(k)) - 1.0;
        for (size_t k = 0; k < v.uy.size(); ++k)
            v.uy[k] = 2.0 * rng.uniform(s, static_cast<uint32_t>(1000 + k)) - 1.0;
        const double vol_integral = cell_sum(divergence(v));
        // outward boundary flux, midpoint rule
        double flux = 0.0;
        for (int j = 0; j < g.ny; ++j)
            flux += (v.x(g.nx, j) - v.x(0, j)) * g.hy();
        for (int i = 0; i < g.nx; ++i)
            flux += (v.y(i, g.ny) - v.y(i, 0)) * g.hx();
        CHECK(vol_integral == doctest::Approx(flux).epsilon(1e-12));
    }
}

TEST_CASE("gradient/divergence adjointness for zero-boundary data") {
    const Grid g(14, 14, 1.0, 1.0);
    const CounterRng rng(23, 0);
    const ScalarField f = random_smooth_scalar(g, rng, 0, 4, 1.0);
    VectorField v = random_solenoidal_velocity(g, rng, 1, 4, 1.0);
    // <div v, f> = -<v, grad f> when v vanishes on the boundary faces
    const double lhs = inner(divergence(v), f);
    const double rhs = -inner(v, gradient(f, BoundaryRule::neumann(g, 0.0)));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("boundary_integral") {
    const Grid g(10, 10, 1.0, 1.0);
    SUBCASE("perimeter of the unit square") {
        CHECK(boundary_integral(BoundaryValues(g, 1.0), g) == doctest::Approx(4.0));
    }
    SUBCASE("zero data") {
        CHECK(boundary_integral(BoundaryValues(g, 0.0), g) == 0.0);
    }
    SUBCASE("f = x integrates to 2 on the boundary") {
        BoundaryValues f(g);
        for (int j = 0; j < g.ny; ++j) {
            f.left[j] = 0.0;
            f.right[j] = 1.0;
        }
        for (int i = 0; i < g.nx; ++i) f.bottom[i] = f.top[i] = g.xc(i);
        CHECK(boundary_integral(f, g) == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("length mismatch is rejected") {
        BoundaryValues bad(g);
        bad.left.pop_back();
        CHECK_THROWS_AS(boundary_integral(bad, g), StructuralError);
    }
}

TEST_CASE("mismatched grids are rejected") {
    const Grid a(8, 8, 1.0, 1.0), b(8, 8, 2.0, 1.0);
    ScalarField f(a);
    BoundaryRule bc = BoundaryRule::neumann(b, 0.0);
    CHECK_THROWS_AS(gradient(f, bc), StructuralError);
}

TEST_CASE("snapshot round trip") {
    namespace fs = std::filesystem;
    const Grid g(8, 6, 1.0, 2.0);
    const CounterRng rng(5, 0);
    const auto dir = fs::temp_directory_path() / "npns_io_test";
    fs::create_directories(dir);

    ScalarField f = random_smooth_scalar(g, rng, 0, 3, 2.5);
    write_snapshot((dir / "f.npns").string(), f, 0.75);
    double t = 0.0;
    const ScalarField f2 = read_scalar_snapshot((dir / "f.npns").string(), g, &t);
    CHECK(t == 0.75);
    CHECK(f2.v == f.v);

    VectorField v = random_solenoidal_velocity(g, rng, 1, 3, 1.0);
    write_snapshot((dir / "v.npns").string(), v, 1.5);
    const VectorField v2 = read_vector_snapshot((dir / "v.npns").string(), g);
    CHECK(v2.ux == v.ux);
    CHECK(v2.uy == v.uy);

    const SnapshotHeader h = read_snapshot_header((dir / "v.npns").string());
    CHECK(h.nx == 8);
    CHECK(h.kind == FieldKind::Vector);
    CHECK_THROWS_AS(read_scalar_snapshot((dir / "v.npns").string(), g), StructuralError);
    fs::remove_all(dir);
}
