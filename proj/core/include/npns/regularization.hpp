#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "npns/diagnostics.hpp"
#include "npns/grid.hpp"
#include "npns/ion_transport.hpp"

namespace npns {

// C-infinity cut-off: exactly 1 on [0, R], exactly 0 on [2R, inf),
// exp(-1/t) transition in between, monotone non-increasing.
double cutoff_phi(double x, double R);

// Discrete Gaussian smoothing of standard deviation eps, boundary handled by
// half-sample mirror reflection. The reflected kernel matrix is symmetric and
// doubly stochastic: constants, total mass, and the L2 bound are exact.
ScalarField mollify(const ScalarField& f, double eps);

// Truncation radii of the modified system; absent means untruncated.
struct TruncationSpec {
    std::optional<double> R_u;    // applied to ||grad u||_2
    std::optional<double> R_psi;  // applied to ||grad psi||_{W^{1,3.5}}
};

// Scalar prefactors for the current state: phi_adv = Phi_{R_u}(||grad u||_2)
// multiplies both convection terms, phi_drift = Phi_{R_psi}(||grad
// psi||_{W^{1,3.5}}) multiplies the drift and Coulomb terms.
TransportFactors truncation_factors(const TruncationSpec& spec,
                                    double grad_u_l2, double grad_psi_w13p);

struct MonitorThresholds {
    double u_h1 = std::numeric_limits<double>::infinity();
    double c_h1 = std::numeric_limits<double>::infinity();
    double grad_u_l2 = std::numeric_limits<double>::infinity();
    double grad_psi_w13p = std::numeric_limits<double>::infinity();
    double u4_running = std::numeric_limits<double>::infinity();
};

struct FirstHits {
    std::optional<size_t> u_h1, c_h1, grad_u_l2, grad_psi_w13p, u4_running;

    std::optional<size_t> earliest() const;
    bool any() const { return earliest().has_value(); }
    const char* which() const;  // name of the earliest-triggering functional
};

// First step index at which each monitored functional exceeds its threshold.
FirstHits stopping_monitor(const std::vector<DiagnosticsRecord>& trajectory,
                           const MonitorThresholds& thresholds);

// Incremental variant used inside the time loop.
void update_hits(FirstHits& hits, const DiagnosticsRecord& rec, size_t step,
                 const MonitorThresholds& thresholds);

}  // namespace npns
