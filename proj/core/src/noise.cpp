#include "npns/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "npns/sampling.hpp"

namespace npns {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

NoiseModel::NoiseModel(const Grid& grid, const NoiseSpec& spec)
    : grid_(grid), spec_(spec) {
    if (spec_.K < 1) throw DomainError("NoiseModel: K must be >= 1");
    if (!(spec_.sigma0 >= 0.0)) throw DomainError("NoiseModel: sigma0 must be >= 0");
    if (!(spec_.q > 0.5))
        throw DomainError("NoiseModel: q must exceed 1/2 so that sum sigma_k^2 is finite");
    if (spec_.mode_family != "cosine")
        throw DomainError("NoiseModel: unknown mode family '" + spec_.mode_family + "'");

    // cosine modes ordered by wavenumber; (0,0) first so phi_1 is flat
    std::vector<std::array<int, 2>> cand;
    int span = 1;
    while (static_cast<int>(cand.size()) < spec_.K) {
        cand.clear();
        for (int m = 0; m <= span; ++m)
            for (int n = 0; n <= span; ++n) cand.push_back({m, n});
        std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
            const int ra = a[0] * a[0] + a[1] * a[1];
            const int rb = b[0] * b[0] + b[1] * b[1];
            if (ra != rb) return ra < rb;
            return a < b;
        });
        ++span;
    }
    cand.resize(static_cast<size_t>(spec_.K));
    for (const auto& mn : cand) {
        if (mn[0] >= grid_.nx || mn[1] >= grid_.ny)
            throw DomainError("NoiseModel: mode count too large for this grid");
        mode_mx_.push_back(mn[0]);
        mode_my_.push_back(mn[1]);
    }

    const double area = grid_.Lx * grid_.Ly;
    sigma_.resize(static_cast<size_t>(spec_.K));
    mode_norm_.resize(static_cast<size_t>(spec_.K));
    phi_x_.resize(static_cast<size_t>(spec_.K));
    phi_y_.resize(static_cast<size_t>(spec_.K));
    qx_.assign(static_cast<size_t>(grid_.xfaces()), 0.0);
    qy_.assign(static_cast<size_t>(grid_.yfaces()), 0.0);

    double max_phi_inf_sq = 0.0;
    double sum_h1 = 0.0;
    for (int k = 0; k < spec_.K; ++k) {
        const int m = mode_mx_[k], n = mode_my_[k];
        sigma_[k] = spec_.sigma0 * std::pow(static_cast<double>(k + 1), -spec_.q);
        sigma_sq_sum_ += sigma_[k] * sigma_[k];
        const double A = std::sqrt((m > 0 ? 2.0 : 1.0) * (n > 0 ? 2.0 : 1.0) / area);
        mode_norm_[k] = A;
        const double kx = m * kPi / grid_.Lx, ky = n * kPi / grid_.Ly;

        auto eval = [&](double x, double y) {
            return A * std::cos(kx * x) * std::cos(ky * y);
        };
        auto& px = phi_x_[k];
        auto& py = phi_y_[k];
        px.resize(static_cast<size_t>(grid_.xfaces()));
        py.resize(static_cast<size_t>(grid_.yfaces()));
        for (int j = 0; j < grid_.ny; ++j)
            for (int i = 0; i <= grid_.nx; ++i)
                px[grid_.xface(i, j)] = eval(i * grid_.hx(), grid_.yc(j));
        for (int j = 0; j <= grid_.ny; ++j)
            for (int i = 0; i < grid_.nx; ++i)
                py[grid_.yface(i, j)] = eval(grid_.xc(i), j * grid_.hy());
        const double s2 = sigma_[k] * sigma_[k];
        for (size_t idx = 0; idx < px.size(); ++idx) qx_[idx] += s2 * px[idx] * px[idx];
        for (size_t idx = 0; idx < py.size(); ++idx) qy_[idx] += s2 * py[idx] * py[idx];

        const double phi_inf_sq = A * A;
        const double grad_inf_sq = A * A * (kx * kx + ky * ky);
        max_phi_inf_sq = std::max(max_phi_inf_sq, phi_inf_sq);
        // discrete product rule: each face enters one x- and one y-difference,
        // hence the factor 2 on the gradient sup
        sum_h1 += s2 * (phi_inf_sq + 2.0 * grad_inf_sq);
    }
    const double mix = spec_.alpha_u * spec_.alpha_u + spec_.alpha_E * spec_.alpha_E;
    ell1_ = 2.0 * mix * sigma_sq_sum_ * max_phi_inf_sq;
    ell3_ = 4.0 * mix * sum_h1;
}

WienerIncrement NoiseModel::sample_increment(const CounterRng& rng, uint64_t step,
                                             double dt) const {
    if (dt < 0.0) throw DomainError("sample_increment: dt must be >= 0");
    WienerIncrement inc;
    inc.dt = dt;
    inc.stream = rng.stream();
    inc.step = step;
    inc.dw.resize(static_cast<size_t>(spec_.K));
    if (dt == 0.0) {
        std::fill(inc.dw.begin(), inc.dw.end(), 0.0);
        return inc;
    }
    rng.normals(step, static_cast<uint32_t>(spec_.K), inc.dw.data());
    const double s = std::sqrt(dt);
    for (double& x : inc.dw) x *= s;
    return inc;
}

void NoiseModel::build_w(const VectorField& u, const VectorField& grad_psi,
                         std::vector<double>& wx, std::vector<double>& wy) const {
    const double au = spec_.alpha_u, ae = spec_.alpha_E;
    wx.assign(static_cast<size_t>(grid_.xfaces()), 0.0);
    wy.assign(static_cast<size_t>(grid_.yfaces()), 0.0);
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 1; i < grid_.nx; ++i) {
            const int k = grid_.xface(i, j);
            wx[k] = au * u.ux[k] + ae * grad_psi.ux[k];
        }
    for (int j = 1; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            const int k = grid_.yface(i, j);
            wy[k] = au * u.uy[k] + ae * grad_psi.uy[k];
        }
}

VectorField NoiseModel::apply(const VectorField& u, const VectorField& grad_psi,
                              const WienerIncrement& inc) const {
    if (u.grid != grid_ || grad_psi.grid != grid_)
        throw StructuralError("noise apply: grid mismatch");
    if (inc.dw.size() != static_cast<size_t>(spec_.K))
        throw StructuralError("noise apply: increment mode count mismatch");

    // S = sum_k sigma_k dW_k phi_k, then increment = S * w
    std::vector<double> sx(static_cast<size_t>(grid_.xfaces()), 0.0);
    std::vector<double> sy(static_cast<size_t>(grid_.yfaces()), 0.0);
    for (int k = 0; k < spec_.K; ++k) {
        const double c = sigma_[static_cast<size_t>(k)] * inc.dw[static_cast<size_t>(k)];
        if (c == 0.0) continue;
        const auto& px = phi_x_[static_cast<size_t>(k)];
        const auto& py = phi_y_[static_cast<size_t>(k)];
        for (size_t idx = 0; idx < sx.size(); ++idx) sx[idx] += c * px[idx];
        for (size_t idx = 0; idx < sy.size(); ++idx) sy[idx] += c * py[idx];
    }
    std::vector<double> wx, wy;
    build_w(u, grad_psi, wx, wy);
    VectorField out(grid_);
    for (size_t idx = 0; idx < wx.size(); ++idx) out.ux[idx] = sx[idx] * wx[idx];
    for (size_t idx = 0; idx < wy.size(); ++idx) out.uy[idx] = sy[idx] * wy[idx];
    out.zero_boundary_faces();
    return out;
}

double NoiseModel::hs_norm_sq(const VectorField& u, const VectorField& grad_psi) const {
    if (u.grid != grid_ || grad_psi.grid != grid_)
        throw StructuralError("hs_norm_sq: grid mismatch");
    std::vector<double> wx, wy;
    build_w(u, grad_psi, wx, wy);
    double s = 0.0;
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 1; i < grid_.nx; ++i) {
            const int k = grid_.xface(i, j);
            s += qx_[k] * wx[k] * wx[k];
        }
    for (int j = 1; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            const int k = grid_.yface(i, j);
            s += qy_[k] * wy[k] * wy[k];
        }
    return s * grid_.cell_area();
}

VectorField NoiseModel::mode_component(int k, const VectorField& u,
                                       const VectorField& grad_psi) const {
    if (k < 0 || k >= spec_.K) throw DomainError("mode_component: index out of range");
    std::vector<double> wx, wy;
    build_w(u, grad_psi, wx, wy);
    VectorField out(grid_);
    const double s = sigma_[static_cast<size_t>(k)];
    const auto& px = phi_x_[static_cast<size_t>(k)];
    const auto& py = phi_y_[static_cast<size_t>(k)];
    for (size_t idx = 0; idx < wx.size(); ++idx) out.ux[idx] = s * px[idx] * wx[idx];
    for (size_t idx = 0; idx < wy.size(); ++idx) out.uy[idx] = s * py[idx] * wy[idx];
    out.zero_boundary_faces();
    return out;
}

ScalarField NoiseModel::mode_on_cells(int k) const {
    if (k < 0 || k >= spec_.K) throw DomainError("mode_on_cells: index out of range");
    ScalarField f(grid_);
    const double A = mode_norm_[static_cast<size_t>(k)];
    const double kx = mode_mx_[static_cast<size_t>(k)] * kPi / grid_.Lx;
    const double ky = mode_my_[static_cast<size_t>(k)] * kPi / grid_.Ly;
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i)
            f(i, j) = A * std::cos(kx * grid_.xc(i)) * std::cos(ky * grid_.yc(j));
    return f;
}

double face_h1_norm_sq(const VectorField& v) {
    const Grid& g = v.grid;
    double s = l2_norm_sq(v);
    const double wx = g.cell_area() / (g.hx() * g.hx());
    const double wy = g.cell_area() / (g.hy() * g.hy());
    // differences between interior faces only
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            const double d = v.x(i + 1, j) - v.x(i, j);
            s += wx * d * d;
        }
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double d = v.x(i, j + 1) - v.x(i, j);
            s += wy * d * d;
        }
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = v.y(i, j + 1) - v.y(i, j);
            s += wy * d * d;
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) {
            const double d = v.y(i + 1, j) - v.y(i, j);
            s += wx * d * d;
        }
    return s;
}

AssumptionReport verify_assumptions(const NoiseModel& model, int n_samples,
                                    uint64_t seed) {
    if (n_samples < 100)
        throw DomainError("verify_assumptions: need at least 100 samples");
    const Grid& g = model.grid();
    AssumptionReport rep;
    rep.samples = n_samples;
    rep.ell1 = model.ell1();
    rep.ell2 = model.ell2();
    rep.ell3 = model.ell3();
    rep.ell4 = model.ell4();

    const CounterRng rng(seed, 0);
    auto hs_h1 = [&](const VectorField& u, const VectorField& gp) {
        double s = 0.0;
        for (int k = 0; k < model.modes(); ++k)
            s += face_h1_norm_sq(model.mode_component(k, u, gp));
        return s;
    };

    for (int s = 0; s < n_samples; ++s) {
        const uint64_t a = static_cast<uint64_t>(2 * s);
        const uint64_t b = a + 1;
        const VectorField u1 = random_solenoidal_velocity(g, rng, a, 4, 1.0);
        const VectorField u2 = random_solenoidal_velocity(g, rng, b, 4, 1.0);
        const VectorField g1 = random_gradient_field(g, rng, a, 4, 1.0);
        const VectorField g2 = random_gradient_field(g, rng, b, 4, 1.0);

        const double growth_den = l2_norm_sq(u1) + l2_norm_sq(g1);
        if (growth_den > 0.0)
            rep.ell1_hat = std::max(rep.ell1_hat, model.hs_norm_sq(u1, g1) / growth_den);

        VectorField du = u1, dg = g1;
        for (size_t k = 0; k < du.ux.size(); ++k) du.ux[k] -= u2.ux[k];
        for (size_t k = 0; k < du.uy.size(); ++k) du.uy[k] -= u2.uy[k];
        for (size_t k = 0; k < dg.ux.size(); ++k) dg.ux[k] -= g2.ux[k];
        for (size_t k = 0; k < dg.uy.size(); ++k) dg.uy[k] -= g2.uy[k];
        const double lip_den = l2_norm_sq(du) + l2_norm_sq(dg);
        if (lip_den > 0.0)
            rep.ell2_hat = std::max(rep.ell2_hat, model.hs_norm_sq(du, dg) / lip_den);

        const double growth_den_h1 = face_h1_norm_sq(u1) + face_h1_norm_sq(g1);
        if (growth_den_h1 > 0.0)
            rep.ell3_hat = std::max(rep.ell3_hat, hs_h1(u1, g1) / growth_den_h1);
        const double lip_den_h1 = face_h1_norm_sq(du) + face_h1_norm_sq(dg);
        if (lip_den_h1 > 0.0)
            rep.ell4_hat = std::max(rep.ell4_hat, hs_h1(du, dg) / lip_den_h1);
    }

    const double slack = 1.0 + 1e-9;
    rep.pass = rep.ell1_hat <= rep.ell1 * slack && rep.ell2_hat <= rep.ell2 * slack &&
               rep.ell3_hat <= rep.ell3 * slack && rep.ell4_hat <= rep.ell4 * slack;
    return rep;
}

}  // namespace npns
