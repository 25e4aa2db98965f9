#include "npns/ion_transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace npns {

double bernoulli(double x) {
    const double ax = std::abs(x);
    double b;
    if (ax < 1e-10) {
        b = 1.0 - 0.5 * ax + ax * ax / 12.0;
    } else {
        b = ax / std::expm1(ax);
    }
    // B(-x) = x + B(x); evaluate on |x| and flip to dodge overflow
    return x >= 0.0 ? b : ax + b;
}

namespace {

struct FaceCoeffs {
    // donor coefficients per face: flux = gl*c_left - gr*c_right
    std::vector<double> gxl, gxr, gyl, gyr;
};

void check_inputs(const IonSpecies& sp, const VectorField& u, const ScalarField& psi) {
    if (sp.c.grid != u.grid || sp.c.grid != psi.grid)
        throw StructuralError("ion transport: fields live on different grids");
    if (!sp.c.all_finite() || !psi.all_finite() || !u.all_finite())
        throw StructuralError("ion transport: non-finite input field");
}

// Donor coefficients of the blended flux
//   F = phi_adv * upwind(u, c) + (1 - phi_drift) * F_diffusion + phi_drift * F_SG,
// all of which keep gl, gr >= 0 so the explicit update is positivity-safe.
FaceCoeffs face_coefficients(const IonSpecies& sp, const VectorField& u,
                             const ScalarField& psi, const TransportFactors& f) {
    const Grid& g = sp.c.grid;
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx(), hy = g.hy();
    const double a = sp.a, z = sp.z;
    const double pd = f.phi_drift, pa = f.phi_adv;

    FaceCoeffs fc;
    fc.gxl.assign(static_cast<size_t>(g.xfaces()), 0.0);
    fc.gxr.assign(static_cast<size_t>(g.xfaces()), 0.0);
    fc.gyl.assign(static_cast<size_t>(g.yfaces()), 0.0);
    fc.gyr.assign(static_cast<size_t>(g.yfaces()), 0.0);

    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double dv = z * (psi(i, j) - psi(i - 1, j));
            const double bl = (1.0 - pd) + pd * bernoulli(dv);
            const double br = (1.0 - pd) + pd * bernoulli(-dv);
            const double uw = pa * u.x(i, j);
            const int k = g.xface(i, j);
            fc.gxl[k] = (a / hx) * bl + std::max(uw, 0.0);
            fc.gxr[k] = (a / hx) * br + std::max(-uw, 0.0);
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double dv = z * (psi(i, j) - psi(i, j - 1));
            const double bl = (1.0 - pd) + pd * bernoulli(dv);
            const double br = (1.0 - pd) + pd * bernoulli(-dv);
            const double uw = pa * u.y(i, j);
            const int k = g.yface(i, j);
            fc.gyl[k] = (a / hy) * bl + std::max(uw, 0.0);
            fc.gyr[k] = (a / hy) * br + std::max(-uw, 0.0);
        }
    return fc;
}

double max_outflow_rate(const FaceCoeffs& fc, const Grid& g) {
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double rate = (fc.gxl[g.xface(i + 1, j)] + fc.gxr[g.xface(i, j)]) * ihx +
                                (fc.gyl[g.yface(i, j + 1)] + fc.gyr[g.yface(i, j)]) * ihy;
            worst = std::max(worst, rate);
        }
    return worst;
}

}  // namespace

VectorField ion_flux(const IonSpecies& sp, const VectorField& u,
                     const ScalarField& psi, const TransportFactors& f) {
    check_inputs(sp, u, psi);
    const Grid& g = sp.c.grid;
    const FaceCoeffs fc = face_coefficients(sp, u, psi, f);
    VectorField flux(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const int k = g.xface(i, j);
            flux.ux[k] = fc.gxl[k] * sp.c(i - 1, j) - fc.gxr[k] * sp.c(i, j);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.yface(i, j);
            flux.uy[k] = fc.gyl[k] * sp.c(i, j - 1) - fc.gyr[k] * sp.c(i, j);
        }
    return flux;
}

double dt_max_ions(const IonState& st, const VectorField& u,
                   const ScalarField& psi, const TransportFactors& f) {
    double dt = std::numeric_limits<double>::infinity();
    for (const IonSpecies& sp : st.species) {
        check_inputs(sp, u, psi);
        const FaceCoeffs fc = face_coefficients(sp, u, psi, f);
        const double rate = max_outflow_rate(fc, sp.c.grid);
        if (rate > 0.0) dt = std::min(dt, 0.9 / rate);
    }
    return dt;
}

void step_ions(IonState& st, const VectorField& u, const ScalarField& psi,
               double dt, const TransportFactors& f) {
    if (!(dt > 0.0)) throw DomainError("step_ions: dt must be positive");
    const double bound = dt_max_ions(st, u, psi, f);
    if (dt > bound)
        throw StepRejected("step_ions: dt " + std::to_string(dt) +
                               " exceeds positivity bound " + std::to_string(bound),
                           bound);

    for (IonSpecies& sp : st.species) {
        const Grid& g = sp.c.grid;
        const int nx = g.nx, ny = g.ny;
        const double ihx = dt / g.hx(), ihy = dt / g.hy();
        const FaceCoeffs fc = face_coefficients(sp, u, psi, f);
        ScalarField next(g);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int e = g.xface(i + 1, j), w = g.xface(i, j);
                const int n = g.yface(i, j + 1), s = g.yface(i, j);
                const double out =
                    (fc.gxl[e] + fc.gxr[w]) * ihx + (fc.gyl[n] + fc.gyr[s]) * ihy;
                double acc = sp.c(i, j) * (1.0 - out);
                if (i > 0) acc += ihx * fc.gxl[w] * sp.c(i - 1, j);
                if (i < nx - 1) acc += ihx * fc.gxr[e] * sp.c(i + 1, j);
                if (j > 0) acc += ihy * fc.gyl[s] * sp.c(i, j - 1);
                if (j < ny - 1) acc += ihy * fc.gyr[n] * sp.c(i, j + 1);
                next(i, j) = acc;
            }
        for (double v : next.v)
            if (v < 0.0)
                throw Error("step_ions: negative concentration after an accepted step");
        sp.c.v.swap(next.v);
    }
}

double total_mass(const ScalarField& c) { return cell_sum(c); }

double entropy(const ScalarField& c, double delta) {
    if (!(delta > 0.0)) throw DomainError("entropy: delta must be positive");
    double s = 0.0;
    for (double x : c.v) {
        if (x < 0.0) throw DomainError("entropy: negative concentration entry");
        s += x * std::log(x + delta);
    }
    return s * c.grid.cell_area();
}

}  // namespace npns
