#include "npns/sampling.hpp"

#include <cmath>

namespace npns {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// random coefficient in [-1, 1] for mode (m, n), decaying with wavenumber
double coeff(const CounterRng& rng, uint64_t step, int m, int n, int max_mode) {
    const uint32_t slot = static_cast<uint32_t>(m * (max_mode + 2) + n);
    const double u = rng.uniform(step, slot);
    return (2.0 * u - 1.0) / (1.0 + m * m + n * n);
}

}  // namespace

ScalarField random_smooth_scalar(const Grid& g, const CounterRng& rng,
                                 uint64_t step, int max_mode, double scale) {
    ScalarField f(g);
    for (int m = 0; m <= max_mode; ++m)
        for (int n = 0; n <= max_mode; ++n) {
            if (m == 0 && n == 0) continue;
            const double a = coeff(rng, step, m, n, max_mode);
            const double kx = m * kPi / g.Lx, ky = n * kPi / g.Ly;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    f(i, j) += a * std::cos(kx * g.xc(i)) * std::cos(ky * g.yc(j));
        }
    for (double& v : f.v) v *= scale;
    return f;
}

ScalarField random_positive_field(const Grid& g, const CounterRng& rng,
                                  uint64_t step, int max_mode, double scale) {
    ScalarField f = random_smooth_scalar(g, rng, step, max_mode, 1.0);
    for (double& v : f.v) v = scale * std::exp(v);
    return f;
}

VectorField random_solenoidal_velocity(const Grid& g, const CounterRng& rng,
                                       uint64_t step, int max_mode, double scale) {
    // corner stream function, zero on the boundary
    const int nx = g.nx, ny = g.ny;
    std::vector<double> s(static_cast<size_t>((nx + 1) * (ny + 1)), 0.0);
    for (int m = 1; m <= max_mode; ++m)
        for (int n = 1; n <= max_mode; ++n) {
            const double a = scale * coeff(rng, step, m, n, max_mode);
            const double kx = m * kPi / g.Lx, ky = n * kPi / g.Ly;
            for (int j = 0; j <= ny; ++j)
                for (int i = 0; i <= nx; ++i)
                    s[static_cast<size_t>(j * (nx + 1) + i)] +=
                        a * std::sin(kx * i * g.hx()) * std::sin(ky * j * g.hy());
        }
    auto sc = [&](int i, int j) { return s[static_cast<size_t>(j * (nx + 1) + i)]; };
    VectorField u(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            u.x(i, j) = (sc(i, j + 1) - sc(i, j)) / g.hy();
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            u.y(i, j) = -(sc(i + 1, j) - sc(i, j)) / g.hx();
    return u;
}

VectorField random_gradient_field(const Grid& g, const CounterRng& rng,
                                  uint64_t step, int max_mode, double scale) {
    const ScalarField f = random_smooth_scalar(g, rng, step + (1ull << 48), max_mode, scale);
    return gradient(f, BoundaryRule::neumann(g, 0.0));
}

}  // namespace npns
