#include "npns/grid.hpp"

#include <algorithm>
#include <cmath>

namespace npns {

Grid::Grid(int nx_, int ny_, double Lx_, double Ly_)
    : nx(nx_), ny(ny_), Lx(Lx_), Ly(Ly_) {
    if (nx < 4 || ny < 4)
        throw StructuralError("Grid: nx and ny must be >= 4");
    if (!(Lx > 0.0) || !(Ly > 0.0))
        throw StructuralError("Grid: side lengths must be positive");
}

bool ScalarField::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void VectorField::zero_boundary_faces() {
    const int nx = grid.nx, ny = grid.ny;
    for (int j = 0; j < ny; ++j) {
        ux[grid.xface(0, j)] = 0.0;
        ux[grid.xface(nx, j)] = 0.0;
    }
    for (int i = 0; i < nx; ++i) {
        uy[grid.yface(i, 0)] = 0.0;
        uy[grid.yface(i, ny)] = 0.0;
    }
}

bool VectorField::boundary_faces_zero() const {
    const int nx = grid.nx, ny = grid.ny;
    for (int j = 0; j < ny; ++j)
        if (ux[grid.xface(0, j)] != 0.0 || ux[grid.xface(nx, j)] != 0.0)
            return false;
    for (int i = 0; i < nx; ++i)
        if (uy[grid.yface(i, 0)] != 0.0 || uy[grid.yface(i, ny)] != 0.0)
            return false;
    return true;
}

bool VectorField::all_finite() const {
    for (double x : ux)
        if (!std::isfinite(x)) return false;
    for (double x : uy)
        if (!std::isfinite(x)) return false;
    return true;
}

namespace {

// Affine boundary-face gradient (Cartesian component) from the ghost closure.
// `interior` is the cell value adjacent to the face, `outward_sign` is the
// sign of the outward normal's Cartesian component, `data` is g (Neumann) or
// eta (Robin). Robin closes d_n psi + s*psi = eta with a centered face value.
inline double boundary_face_grad(BcKind kind, double varsigma, double data,
                                 double interior, double h, double outward_sign) {
    switch (kind) {
        case BcKind::Neumann:
            return outward_sign * data;
        case BcKind::Robin:
            // ghost = [eta + psi*(1/h - s/2)] / (1/h + s/2); grad toward outward
            // normal is (ghost - psi)/h; Cartesian component carries the sign.
            return outward_sign * (data - varsigma * interior) * 2.0 /
                   (2.0 + varsigma * h);
        case BcKind::Dirichlet0:
            // ghost = -interior so the face value vanishes
            return outward_sign * (-2.0 * interior / h);
    }
    return 0.0;
}

}  // namespace

VectorField gradient(const ScalarField& f, const BoundaryRule& bc) {
    const Grid& g = f.grid;
    if (f.v.size() != static_cast<size_t>(g.cells()))
        throw StructuralError("gradient: field size does not match its grid");
    if (bc.kind != BcKind::Dirichlet0 && !bc.data.matches(g))
        throw StructuralError("gradient: boundary data does not match the grid");

    VectorField out(g);
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx(), hy = g.hy();

    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i)
            out.x(i, j) = (f(i, j) - f(i - 1, j)) / hx;
        const double dl = (bc.kind == BcKind::Dirichlet0) ? 0.0 : bc.data.left[j];
        const double dr = (bc.kind == BcKind::Dirichlet0) ? 0.0 : bc.data.right[j];
        out.x(0, j) = boundary_face_grad(bc.kind, bc.varsigma, dl, f(0, j), hx, -1.0);
        out.x(nx, j) = boundary_face_grad(bc.kind, bc.varsigma, dr, f(nx - 1, j), hx, +1.0);
    }
    for (int i = 0; i < nx; ++i) {
        for (int j = 1; j < ny; ++j)
            out.y(i, j) = (f(i, j) - f(i, j - 1)) / hy;
        const double db = (bc.kind == BcKind::Dirichlet0) ? 0.0 : bc.data.bottom[i];
        const double dt = (bc.kind == BcKind::Dirichlet0) ? 0.0 : bc.data.top[i];
        out.y(i, 0) = boundary_face_grad(bc.kind, bc.varsigma, db, f(i, 0), hy, -1.0);
        out.y(i, ny) = boundary_face_grad(bc.kind, bc.varsigma, dt, f(i, ny - 1), hy, +1.0);
    }
    return out;
}

ScalarField divergence(const VectorField& v) {
    const Grid& g = v.grid;
    if (v.ux.size() != static_cast<size_t>(g.xfaces()) ||
        v.uy.size() != static_cast<size_t>(g.yfaces()))
        throw StructuralError("divergence: face arrays do not match the grid");

    ScalarField out(g);
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = (v.x(i + 1, j) - v.x(i, j)) * ihx +
                        (v.y(i, j + 1) - v.y(i, j)) * ihy;
    return out;
}

double boundary_integral(const BoundaryValues& f, const Grid& g) {
    if (!f.matches(g))
        throw StructuralError("boundary_integral: value count does not match the boundary");
    double s = 0.0;
    for (double x : f.left) s += x * g.hy();
    for (double x : f.right) s += x * g.hy();
    for (double x : f.bottom) s += x * g.hx();
    for (double x : f.top) s += x * g.hx();
    return s;
}

double cell_sum(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return s * f.grid.cell_area();
}

double l1_norm(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.v) s += std::abs(x);
    return s * f.grid.cell_area();
}

double l2_norm_sq(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return s * f.grid.cell_area();
}

double lp_norm(const ScalarField& f, double p) {
    double s = 0.0;
    if (p == 1.0) {
        for (double x : f.v) s += std::abs(x);
    } else if (p == 2.0) {
        for (double x : f.v) s += x * x;
    } else if (p == 4.0) {
        for (double x : f.v) {
            const double x2 = x * x;
            s += x2 * x2;
        }
    } else if (p == 8.0) {
        for (double x : f.v) {
            const double x2 = x * x;
            const double x4 = x2 * x2;
            s += x4 * x4;
        }
    } else {
        for (double x : f.v) s += std::pow(std::abs(x), p);
    }
    return std::pow(s * f.grid.cell_area(), 1.0 / p);
}

double inner(const ScalarField& a, const ScalarField& b) {
    if (a.grid != b.grid)
        throw StructuralError("inner: fields live on different grids");
    double s = 0.0;
    for (size_t k = 0; k < a.v.size(); ++k) s += a.v[k] * b.v[k];
    return s * a.grid.cell_area();
}

double l2_norm_sq(const VectorField& v) { return inner(v, v); }

double inner(const VectorField& a, const VectorField& b) {
    if (a.grid != b.grid)
        throw StructuralError("inner: fields live on different grids");
    const Grid& g = a.grid;
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            s += a.x(i, j) * b.x(i, j);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            s += a.y(i, j) * b.y(i, j);
    return s * g.cell_area();
}

double max_norm(const VectorField& v) {
    double m = 0.0;
    for (double x : v.ux) m = std::max(m, std::abs(x));
    for (double x : v.uy) m = std::max(m, std::abs(x));
    return m;
}

double max_norm(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double grad_norm_sq(const ScalarField& f) {
    const Grid& g = f.grid;
    const double wx = g.cell_area() / (g.hx() * g.hx());
    const double wy = g.cell_area() / (g.hy() * g.hy());
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double d = f(i, j) - f(i - 1, j);
            s += wx * d * d;
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = f(i, j) - f(i, j - 1);
            s += wy * d * d;
        }
    return s;
}

double grad_norm_sq_noslip(const VectorField& u) {
    const Grid& g = u.grid;
    const int nx = g.nx, ny = g.ny;
    const double wx = g.cell_area() / (g.hx() * g.hx());
    const double wy = g.cell_area() / (g.hy() * g.hy());
    double s = 0.0;

    // ux: d/dx across cells (Dirichlet ends are stored zeros), d/dy across
    // corners with mirror ghosts at the walls (|2u| over hy).
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double d = u.x(i + 1, j) - u.x(i, j);
            s += wx * d * d;
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double d = u.x(i, j) - u.x(i, j - 1);
            s += wy * d * d;
        }
    for (int i = 1; i < nx; ++i) {
        s += wy * 2.0 * u.x(i, 0) * u.x(i, 0);
        s += wy * 2.0 * u.x(i, ny - 1) * u.x(i, ny - 1);
    }

    // uy: symmetric roles of x and y.
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double d = u.y(i, j + 1) - u.y(i, j);
            s += wy * d * d;
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double d = u.y(i, j) - u.y(i - 1, j);
            s += wx * d * d;
        }
    for (int j = 1; j < ny; ++j) {
        s += wx * 2.0 * u.y(0, j) * u.y(0, j);
        s += wx * 2.0 * u.y(nx - 1, j) * u.y(nx - 1, j);
    }
    return s;
}

double boundary_l1(const BoundaryValues& f, const Grid& g) {
    double s = 0.0;
    for (double x : f.left) s += std::abs(x) * g.hy();
    for (double x : f.right) s += std::abs(x) * g.hy();
    for (double x : f.bottom) s += std::abs(x) * g.hx();
    for (double x : f.top) s += std::abs(x) * g.hx();
    return s;
}

}  // namespace npns
