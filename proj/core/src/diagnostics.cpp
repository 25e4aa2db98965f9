#include "npns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <tuple>

#include "npns/sampling.hpp"

namespace npns {

namespace {

BoundaryRule psi_rule(const Grid& g, const BoundaryValues& eta, double varsigma) {
    (void)g;
    return varsigma > 0.0 ? BoundaryRule::robin(varsigma, eta)
                          : BoundaryRule::neumann(eta);
}

// Robin/Neumann-consistent wall trace of psi: (2 psi + h eta) / (2 + s h).
double boundary_trace_sq_integral(const ScalarField& psi, const BoundaryValues& eta,
                                  double varsigma) {
    const Grid& g = psi.grid;
    auto face = [&](double interior, double data, double h) {
        const double v = (2.0 * interior + h * data) / (2.0 + varsigma * h);
        return v * v;
    };
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        s += face(psi(0, j), eta.left[j], g.hx()) * g.hy();
        s += face(psi(g.nx - 1, j), eta.right[j], g.hx()) * g.hy();
    }
    for (int i = 0; i < g.nx; ++i) {
        s += face(psi(i, 0), eta.bottom[i], g.hy()) * g.hx();
        s += face(psi(i, g.ny - 1), eta.top[i], g.hy()) * g.hx();
    }
    return s;
}

// cell derivative, centered interior, one-sided at the walls
ScalarField cell_dx(const ScalarField& f) {
    const Grid& g = f.grid;
    ScalarField d(g);
    const double ihx = 1.0 / g.hx();
    for (int j = 0; j < g.ny; ++j) {
        d(0, j) = (f(1, j) - f(0, j)) * ihx;
        for (int i = 1; i < g.nx - 1; ++i)
            d(i, j) = (f(i + 1, j) - f(i - 1, j)) * (0.5 * ihx);
        d(g.nx - 1, j) = (f(g.nx - 1, j) - f(g.nx - 2, j)) * ihx;
    }
    return d;
}

ScalarField cell_dy(const ScalarField& f) {
    const Grid& g = f.grid;
    ScalarField d(g);
    const double ihy = 1.0 / g.hy();
    for (int i = 0; i < g.nx; ++i) {
        d(i, 0) = (f(i, 1) - f(i, 0)) * ihy;
        for (int j = 1; j < g.ny - 1; ++j)
            d(i, j) = (f(i, j + 1) - f(i, j - 1)) * (0.5 * ihy);
        d(i, g.ny - 1) = (f(i, g.ny - 1) - f(i, g.ny - 2)) * ihy;
    }
    return d;
}

}  // namespace

FreeEnergy free_energy(const VectorField& u, const IonState& ions,
                       const ScalarField& psi, const BoundaryValues& eta,
                       double varsigma, double delta) {
    FreeEnergy e;
    e.kinetic = 0.5 * l2_norm_sq(u);
    for (const IonSpecies& sp : ions.species) e.gibbs += entropy(sp.c, delta);
    const VectorField gp = gradient(psi, psi_rule(psi.grid, eta, varsigma));
    e.electric = 0.5 * l2_norm_sq(gp);
    e.boundary = varsigma > 0.0
                     ? 0.5 * varsigma * boundary_trace_sq_integral(psi, eta, varsigma)
                     : 0.0;
    return e;
}

ScalarField electrochemical_potential(const IonSpecies& sp, const ScalarField& psi,
                                      double delta) {
    ScalarField theta(psi.grid);
    for (size_t k = 0; k < theta.v.size(); ++k)
        theta.v[k] = std::log(sp.c.v[k] + delta) + sp.z * psi.v[k];
    return theta;
}

double dissipation(const VectorField& u, const IonState& ions,
                   const ScalarField& psi, double mu, double delta) {
    const Grid& g = psi.grid;
    const double area = g.cell_area();
    double total = 0.0;
    for (const IonSpecies& sp : ions.species) {
        const ScalarField theta = electrochemical_potential(sp, psi, delta);
        double s = 0.0;
        const double ihx2 = 1.0 / (g.hx() * g.hx());
        const double ihy2 = 1.0 / (g.hy() * g.hy());
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) {
                const double cbar = 0.5 * (sp.c(i - 1, j) + sp.c(i, j));
                const double dth = theta(i, j) - theta(i - 1, j);
                s += cbar * dth * dth * ihx2;
            }
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double cbar = 0.5 * (sp.c(i, j - 1) + sp.c(i, j));
                const double dth = theta(i, j) - theta(i, j - 1);
                s += cbar * dth * dth * ihy2;
            }
        total += sp.a * s * area;
    }
    total += mu * grad_norm_sq_noslip(u);
    return total;
}

double charge_identity_residual(const ScalarField& c1, const ScalarField& c2,
                                double z1, double z2) {
    if (!(z1 > 0.0 && z2 < 0.0))
        throw DomainError("charge_identity_residual: needs z1 > 0 > z2");
    if (c1.grid != c2.grid)
        throw StructuralError("charge_identity_residual: grid mismatch");
    const double az1 = z1, az2 = -z2;
    double worst = 0.0;
    for (size_t k = 0; k < c1.v.size(); ++k) {
        const double a = c1.v[k], b = c2.v[k];
        const double rho = z1 * a + z2 * b;
        const double lhs = rho * (z1 * z1 * a * a - z2 * z2 * b * b);
        const double rhs = rho * rho * (az1 * a + az2 * b);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

std::pair<double, double> charge_pair_l2(const IonState& ions) {
    if (ions.species.empty()) return {0.0, 0.0};
    const Grid& g = ions.species.front().c.grid;
    ScalarField rho(g), chi(g);
    for (const IonSpecies& sp : ions.species)
        for (size_t k = 0; k < rho.v.size(); ++k) {
            rho.v[k] += sp.z * sp.c.v[k];
            chi.v[k] += std::abs(sp.z) * sp.c.v[k];
        }
    return {std::sqrt(l2_norm_sq(rho)), std::sqrt(l2_norm_sq(chi))};
}

double grad_psi_w13p_norm(const ScalarField& psi, double p) {
    const ScalarField gx = cell_dx(psi);
    const ScalarField gy = cell_dy(psi);
    const ScalarField hxx = cell_dx(gx);
    const ScalarField hyy = cell_dy(gy);
    const ScalarField hxy = cell_dy(gx);
    const double area = psi.grid.cell_area();
    const bool p35 = (p == 3.5);
    auto powp = [&](double x) {
        return p35 ? x * x * x * std::sqrt(x) : std::pow(x, p);
    };
    double sg = 0.0, sh = 0.0;
    for (size_t k = 0; k < psi.v.size(); ++k) {
        const double gmag = std::sqrt(gx.v[k] * gx.v[k] + gy.v[k] * gy.v[k]);
        const double hmag = std::sqrt(hxx.v[k] * hxx.v[k] + hyy.v[k] * hyy.v[k] +
                                      2.0 * hxy.v[k] * hxy.v[k]);
        sg += powp(gmag);
        sh += powp(hmag);
    }
    return std::pow((sg + sh) * area, 1.0 / p);
}

BlowupIndicators blowup_indicators(const VectorField& u, const IonState& ions,
                                   const ScalarField& psi) {
    BlowupIndicators b;
    b.grad_u_l2 = std::sqrt(grad_norm_sq_noslip(u));
    b.grad_psi_w13p = grad_psi_w13p_norm(psi);
    b.u_h1 = std::sqrt(l2_norm_sq(u) + b.grad_u_l2 * b.grad_u_l2);
    for (const IonSpecies& sp : ions.species)
        b.c_h1_max = std::max(
            b.c_h1_max, std::sqrt(l2_norm_sq(sp.c) + grad_norm_sq(sp.c)));
    return b;
}

std::vector<double> lj_norms(const ScalarField& c, const std::vector<double>& js) {
    for (double x : c.v)
        if (x < 0.0) throw DomainError("lj_norms: negative concentration entry");
    std::vector<double> out;
    out.reserve(js.size());
    for (double j : js) out.push_back(lp_norm(c, j));
    return out;
}

DiagnosticsRecord diagnose(double t, const VectorField& u, const IonState& ions,
                           const ScalarField& psi, const BoundaryValues& eta,
                           double varsigma, double mu, double ito_half_hs,
                           double u4_running) {
    DiagnosticsRecord r;
    r.t = t;
    const FreeEnergy e = free_energy(u, ions, psi, eta, varsigma, ions.entropy_delta);
    r.kinetic = e.kinetic;
    r.gibbs = e.gibbs;
    r.electric = e.electric;
    r.boundary_energy = e.boundary;
    r.dissipation = dissipation(u, ions, psi, mu, ions.entropy_delta);
    r.ito_half_hs = ito_half_hs;
    for (const IonSpecies& sp : ions.species) {
        r.masses.push_back(total_mass(sp.c));
        r.min_c.push_back(*std::min_element(sp.c.v.begin(), sp.c.v.end()));
        std::array<double, 4> lj{};
        for (size_t k = 0; k < kLjExponents.size(); ++k)
            lj[k] = lp_norm(sp.c, kLjExponents[k]);
        r.lj_norms.push_back(lj);
        r.c_h1.push_back(std::sqrt(l2_norm_sq(sp.c) + grad_norm_sq(sp.c)));
    }
    const BlowupIndicators b = blowup_indicators(u, ions, psi);
    r.grad_u_l2 = b.grad_u_l2;
    r.grad_psi_w13p = b.grad_psi_w13p;
    r.u_h1 = b.u_h1;
    r.u4_running = u4_running;
    return r;
}

double energy_balance_residual(const std::vector<DiagnosticsRecord>& records,
                               const std::vector<double>& noise_work) {
    if (records.size() < 2)
        throw DomainError("energy_balance_residual: need at least two records");
    if (noise_work.size() != records.size() - 1)
        throw StructuralError("energy_balance_residual: one work entry per step required");
    const double dt = records[1].t - records[0].t;
    for (size_t n = 1; n + 1 < records.size(); ++n) {
        const double d = records[n + 1].t - records[n].t;
        if (std::abs(d - dt) > 1e-9 * std::max(std::abs(dt), 1e-300))
            throw DomainError("energy_balance_residual: non-uniform dt");
    }
    double residual = records.back().total_energy() - records.front().total_energy();
    for (size_t n = 0; n + 1 < records.size(); ++n) {
        residual += records[n].dissipation * dt;
        residual -= noise_work[n];
        residual -= records[n].ito_half_hs * dt;
    }
    return residual;
}

std::string csv_header(int n_species) {
    std::string h = "t,kinetic,gibbs,electric,boundary_energy,dissipation,ito_half_hs";
    auto per_species = [&](const std::string& stem) {
        for (int i = 1; i <= n_species; ++i) h += "," + stem + std::to_string(i);
    };
    per_species("mass_c");
    per_species("min_c");
    for (int i = 1; i <= n_species; ++i)
        for (double j : kLjExponents)
            h += ",l" + std::to_string(static_cast<int>(j)) + "_c" + std::to_string(i);
    h += ",grad_u_l2,grad_psi_w13p,u_h1";
    per_species("h1_c");
    h += ",u4_running";
    return h;
}

std::string csv_row(const DiagnosticsRecord& r) {
    char buf[64];
    std::string row;
    auto put = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        if (!row.empty()) row += ',';
        row += buf;
    };
    put(r.t);
    put(r.kinetic);
    put(r.gibbs);
    put(r.electric);
    put(r.boundary_energy);
    put(r.dissipation);
    put(r.ito_half_hs);
    for (double x : r.masses) put(x);
    for (double x : r.min_c) put(x);
    for (const auto& lj : r.lj_norms)
        for (double x : lj) put(x);
    put(r.grad_u_l2);
    put(r.grad_psi_w13p);
    put(r.u_h1);
    for (double x : r.c_h1) put(x);
    put(r.u4_running);
    return row;
}

void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records,
               int n_species) {
    out << csv_header(n_species) << '\n';
    for (const auto& r : records) out << csv_row(r) << '\n';
}

double measured_equivalence_constant(const Grid& g, double varsigma,
                                     int n_samples, uint64_t seed) {
    static std::mutex mtx;
    static std::map<std::tuple<int, int, double, double, double>, double> cache;
    const auto key = std::make_tuple(g.nx, g.ny, g.Lx, g.Ly, varsigma);
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    const CounterRng rng(seed, 0);
    PoissonOptions opt;
    opt.project_incompatible = true;
    PoissonSolver solver(g, varsigma, BoundaryValues(g, 0.0), opt);

    double worst = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        const uint64_t step = static_cast<uint64_t>(s);
        // span a wide range of relative field amplitudes
        const double su = std::pow(10.0, 2.0 * (rng.uniform(step, 1000) - 0.5) * 2.0);
        const double sc = std::pow(10.0, 2.0 * (rng.uniform(step, 1001) - 0.5) * 2.0);

        IonState ions;
        ions.species.resize(2);
        ions.species[0] = {1.0, 1.0, random_positive_field(g, rng, 3 * step, 4, sc)};
        ions.species[1] = {-1.0, 1.0, random_positive_field(g, rng, 3 * step + 1, 4, sc)};
        // neutralize total charge so the varsigma = 0 solve stays compatible
        const double m0 = total_mass(ions.species[0].c);
        const double m1 = total_mass(ions.species[1].c);
        if (m1 > 0.0)
            for (double& v : ions.species[1].c.v) v *= m0 / m1;

        ScalarField rho(g);
        for (const auto& sp : ions.species)
            for (size_t k = 0; k < rho.v.size(); ++k) rho.v[k] += sp.z * sp.c.v[k];
        const ScalarField psi = solver.solve(rho);
        const VectorField u = random_solenoidal_velocity(g, rng, 3 * step + 2, 4, su);

        const BlowupIndicators b = blowup_indicators(u, ions, psi);
        double mon1 = b.u_h1;
        for (const auto& sp : ions.species)
            mon1 = std::max(mon1, std::sqrt(l2_norm_sq(sp.c) + grad_norm_sq(sp.c)));
        const double mon2 = b.grad_u_l2 + b.grad_psi_w13p;
        if (mon2 > 0.0) worst = std::max(worst, mon1 / mon2);
    }

    std::lock_guard<std::mutex> lock(mtx);
    cache[key] = worst;
    return worst;
}

}  // namespace npns
