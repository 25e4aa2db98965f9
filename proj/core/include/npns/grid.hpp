#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "npns/errors.hpp"

namespace npns {

// Uniform MAC-staggered rectangle [0,Lx] x [0,Ly].
//
// Layouts (all row-major, x fastest):
//   cells    : nx*ny,        centers  ((i+1/2)hx, (j+1/2)hy)
//   x-faces  : (nx+1)*ny,    centers  (i hx, (j+1/2)hy),  i=0..nx
//   y-faces  : nx*(ny+1),    centers  ((i+1/2)hx, j hy),  j=0..ny
// Boundary faces are x-faces with i in {0,nx} and y-faces with j in {0,ny}.
struct Grid {
    int nx = 0, ny = 0;
    double Lx = 0.0, Ly = 0.0;

    Grid() = default;
    Grid(int nx_, int ny_, double Lx_, double Ly_);

    double hx() const { return Lx / nx; }
    double hy() const { return Ly / ny; }
    double cell_area() const { return hx() * hy(); }
    int cells() const { return nx * ny; }
    int xfaces() const { return (nx + 1) * ny; }
    int yfaces() const { return nx * (ny + 1); }

    int cell(int i, int j) const { return j * nx + i; }
    int xface(int i, int j) const { return j * (nx + 1) + i; }
    int yface(int i, int j) const { return j * nx + i; }

    double xc(int i) const { return (i + 0.5) * hx(); }
    double yc(int j) const { return (j + 0.5) * hy(); }

    bool operator==(const Grid& o) const {
        return nx == o.nx && ny == o.ny && Lx == o.Lx && Ly == o.Ly;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Cell-centered scalar field.
struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), v(static_cast<size_t>(g.cells()), fill) {}

    double& operator()(int i, int j) { return v[grid.cell(i, j)]; }
    double operator()(int i, int j) const { return v[grid.cell(i, j)]; }
    bool all_finite() const;
};

/// Face-centered (MAC) vector field; ux on x-faces, uy on y-faces.
struct VectorField {
    Grid grid;
    std::vector<double> ux, uy;

    VectorField() = default;
    explicit VectorField(const Grid& g)
        : grid(g),
          ux(static_cast<size_t>(g.xfaces()), 0.0),
          uy(static_cast<size_t>(g.yfaces()), 0.0) {}

    double& x(int i, int j) { return ux[grid.xface(i, j)]; }
    double x(int i, int j) const { return ux[grid.xface(i, j)]; }
    double& y(int i, int j) { return uy[grid.yface(i, j)]; }
    double y(int i, int j) const { return uy[grid.yface(i, j)]; }

    void zero_boundary_faces();
    bool boundary_faces_zero() const;
    bool all_finite() const;
};

// One value per boundary face, walls stored separately.
// left/right have ny entries (j-indexed), bottom/top have nx entries.
struct BoundaryValues {
    std::vector<double> left, right, bottom, top;

    BoundaryValues() = default;
    explicit BoundaryValues(const Grid& g, double fill = 0.0)
        : left(static_cast<size_t>(g.ny), fill),
          right(static_cast<size_t>(g.ny), fill),
          bottom(static_cast<size_t>(g.nx), fill),
          top(static_cast<size_t>(g.nx), fill) {}

    bool matches(const Grid& g) const {
        return left.size() == static_cast<size_t>(g.ny) &&
               right.size() == static_cast<size_t>(g.ny) &&
               bottom.size() == static_cast<size_t>(g.nx) &&
               top.size() == static_cast<size_t>(g.nx);
    }
};

enum class BcKind {
    Neumann,     // outward normal derivative prescribed per face
    Robin,       // d_n psi + varsigma*psi = eta per face, varsigma > 0
    Dirichlet0,  // zero value on the wall
};

// Ghost-cell boundary closure for cell-centered fields.
// Neumann is Robin with varsigma = 0; data carries g resp. eta.
struct BoundaryRule {
    BcKind kind = BcKind::Neumann;
    double varsigma = 0.0;
    BoundaryValues data;

    static BoundaryRule neumann(const Grid& g, double value = 0.0) {
        BoundaryRule r;
        r.kind = BcKind::Neumann;
        r.varsigma = 0.0;
        r.data = BoundaryValues(g, value);
        return r;
    }
    static BoundaryRule neumann(BoundaryValues values) {
        BoundaryRule r;
        r.kind = BcKind::Neumann;
        r.varsigma = 0.0;
        r.data = std::move(values);
        return r;
    }
    static BoundaryRule robin(double varsigma, BoundaryValues eta) {
        BoundaryRule r;
        r.kind = BcKind::Robin;
        r.varsigma = varsigma;
        r.data = std::move(eta);
        return r;
    }
    static BoundaryRule dirichlet0() {
        BoundaryRule r;
        r.kind = BcKind::Dirichlet0;
        return r;
    }
};

// ---- discrete operators ----

// Second-order face gradient with boundary faces closed by ghost values.
VectorField gradient(const ScalarField& f, const BoundaryRule& bc);

// Flux-form divergence; cell sums telescope to boundary-face fluxes exactly.
ScalarField divergence(const VectorField& v);

// Midpoint rule over the boundary: sum of value * face length.
double boundary_integral(const BoundaryValues& f, const Grid& g);

// ---- quadrature and norms ----

double cell_sum(const ScalarField& f);               // sum f * cell area
double l1_norm(const ScalarField& f);                // sum |f| * cell area
double l2_norm_sq(const ScalarField& f);
double lp_norm(const ScalarField& f, double p);
double inner(const ScalarField& a, const ScalarField& b);

// Face-field L2 uses interior faces only (full cell-area weight per face);
// boundary faces carry Dirichlet/flux data and are excluded by convention.
double l2_norm_sq(const VectorField& v);
double inner(const VectorField& a, const VectorField& b);
double max_norm(const VectorField& v);
double max_norm(const ScalarField& f);

// H1 seminorm of a cell field from interior face differences (no wall term).
double grad_norm_sq(const ScalarField& f);

// Velocity gradient seminorm consistent with the no-slip viscous operator:
// interior differences plus mirror-ghost wall terms, so that
// <-Lap_h u, u> == grad_norm_sq_noslip(u) exactly.
double grad_norm_sq_noslip(const VectorField& u);

double boundary_l1(const BoundaryValues& f, const Grid& g);  // sum |f|*len

}  // namespace npns
