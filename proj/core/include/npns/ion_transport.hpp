#pragma once

#include <vector>

#include "npns/grid.hpp"

namespace npns {

/// One ionic species: valence z, diffusivity a > 0, concentration c >= 0.
struct IonSpecies {
    double z = 0.0;
    double a = 1.0;
    ScalarField c;
};

struct IonState {
    std::vector<IonSpecies> species;
    double entropy_delta = 1e-12;  // the log(c + delta) regularization
};

// Cut-off prefactors of the truncated system: phi_adv multiplies fluid
// advection of c, phi_drift blends the electromigration part of the flux.
// Both default to 1 (untruncated path, bitwise identical).
struct TransportFactors {
    double phi_adv = 1.0;
    double phi_drift = 1.0;
};

/// x/(e^x - 1), continuous at 0, overflow-safe for large |x|.
double bernoulli(double x);

// Face fluxes b = u c (upwind) - a(grad c + z c grad psi) (Scharfetter-Gummel).
// Blocking walls: every boundary face flux is exactly zero.
VectorField ion_flux(const IonSpecies& sp, const VectorField& u,
                     const ScalarField& psi, const TransportFactors& f = {});

// Largest positivity-safe explicit step (0.9 x the donor-cell bound),
// minimum over species. Infinite when nothing moves.
double dt_max_ions(const IonState& st, const VectorField& u,
                   const ScalarField& psi, const TransportFactors& f = {});

// Conservative explicit Euler update c <- c - dt div(ion_flux).
// Throws StepRejected when dt exceeds dt_max_ions.
void step_ions(IonState& st, const VectorField& u, const ScalarField& psi,
               double dt, const TransportFactors& f = {});

double total_mass(const ScalarField& c);

/// Gibbs entropy sum c log(c + delta) * cell area. Rejects negative c.
double entropy(const ScalarField& c, double delta);

}  // namespace npns
