#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "npns/grid.hpp"
#include "npns/ion_transport.hpp"
#include "npns/poisson.hpp"

namespace npns {

inline constexpr std::array<double, 4> kLjExponents = {1.0, 2.0, 4.0, 8.0};

// Per-step functional record. CSV columns follow field order exactly:
// t, kinetic, gibbs, electric, boundary_energy, dissipation, ito_half_hs,
// mass per species, min_c per species, L^j norms per species (j = 1,2,4,8),
// grad_u_l2, grad_psi_w13p, u_h1, c_h1 per species, u4_running.
struct DiagnosticsRecord {
    double t = 0.0;
    double kinetic = 0.0;          // 1/2 ||u||_2^2
    double gibbs = 0.0;            // sum_i int c log(c + delta)
    double electric = 0.0;         // 1/2 ||grad psi||_2^2
    double boundary_energy = 0.0;  // (varsigma/2) ||psi||_{L2(boundary)}^2
    double dissipation = 0.0;      // sum_i a_i ||sqrt(c) grad theta||^2 + mu ||grad u||^2
    double ito_half_hs = 0.0;      // 1/2 * hs_norm_sq at this state
    std::vector<double> masses;
    std::vector<double> min_c;
    std::vector<std::array<double, 4>> lj_norms;
    double grad_u_l2 = 0.0;
    double grad_psi_w13p = 0.0;    // W^{1,3.5} norm of grad psi
    double u_h1 = 0.0;
    std::vector<double> c_h1;
    double u4_running = 0.0;       // running integral of ||grad u||^2 ||u||^2

    double total_energy() const {
        return kinetic + gibbs + electric + boundary_energy;
    }
};

struct FreeEnergy {
    double kinetic = 0.0, gibbs = 0.0, electric = 0.0, boundary = 0.0;
    double total() const { return kinetic + gibbs + electric + boundary; }
};

FreeEnergy free_energy(const VectorField& u, const IonState& ions,
                       const ScalarField& psi, const BoundaryValues& eta,
                       double varsigma, double delta);

// sum_i a_i sum_faces mean(c) |grad theta|^2 + mu ||grad u||^2,
// theta = log(c + delta) + z psi. Face concentration is the arithmetic mean.
double dissipation(const VectorField& u, const IonState& ions,
                   const ScalarField& psi, double mu, double delta);

ScalarField electrochemical_potential(const IonSpecies& sp, const ScalarField& psi,
                                      double delta);

// Max-norm residual of rho(z1^2 c1^2 - z2^2 c2^2) = rho^2(|z1| c1 + |z2| c2),
// rho = z1 c1 + z2 c2. Requires opposite valences z1 > 0 > z2.
double charge_identity_residual(const ScalarField& c1, const ScalarField& c2,
                                double z1, double z2);

// Conserved-pair fields of the equal-diffusivity, equal-|z| regime:
// rho = sum z_i c_i and chi = sum |z_i| c_i (monitored, no claim otherwise).
std::pair<double, double> charge_pair_l2(const IonState& ions);

struct BlowupIndicators {
    double grad_u_l2 = 0.0;
    double grad_psi_w13p = 0.0;
    double u_h1 = 0.0;
    double c_h1_max = 0.0;
};

BlowupIndicators blowup_indicators(const VectorField& u, const IonState& ions,
                                   const ScalarField& psi);

// (||grad psi||_p^p + ||Hess psi||_p^p)^(1/p) with p = 3.5; cell-centered
// derivatives, one-sided at the walls.
double grad_psi_w13p_norm(const ScalarField& psi, double p = 3.5);

std::vector<double> lj_norms(const ScalarField& c, const std::vector<double>& js);

// Full per-step record; ito_half_hs and u4_running are supplied by the caller.
DiagnosticsRecord diagnose(double t, const VectorField& u, const IonState& ions,
                           const ScalarField& psi, const BoundaryValues& eta,
                           double varsigma, double mu, double ito_half_hs,
                           double u4_running);

// Pathwise discrete energy budget: E(T) - E(0) + sum diss dt - sum work -
// sum ito dt over a uniform-dt record sequence. noise_work has one entry per
// step (records.size() - 1).
double energy_balance_residual(const std::vector<DiagnosticsRecord>& records,
                               const std::vector<double>& noise_work);

// CSV schema (header + rows in record field order, %.17g).
std::string csv_header(int n_species);
std::string csv_row(const DiagnosticsRecord& r);
void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records,
               int n_species);

// Measured discrete norm-equivalence constant sup mon1/mon2 over a family of
// random states, where mon1 = max(u_h1, max_i c_h1) and mon2 = grad_u_l2 +
// grad_psi_w13p. Cached per (grid, varsigma).
double measured_equivalence_constant(const Grid& g, double varsigma,
                                     int n_samples = 400, uint64_t seed = 77);

}  // namespace npns
