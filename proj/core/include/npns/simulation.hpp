#pragma once

#include <memory>
#include <string>
#include <vector>

#include "npns/config.hpp"
#include "npns/diagnostics.hpp"
#include "npns/fluid.hpp"
#include "npns/ion_transport.hpp"
#include "npns/noise.hpp"
#include "npns/poisson.hpp"
#include "npns/regularization.hpp"

namespace npns {

enum class RunStatus {
    Completed = 0,
    MonitorStop = 4,  // a stopping monitor fired
    Failed = 3,       // solver error, step rejection, or poisoned state
};

struct TrajectoryResult {
    RunStatus status = RunStatus::Completed;
    std::string message;
    uint64_t stream = 0;
    size_t steps = 0;
    std::vector<DiagnosticsRecord> records;
    std::vector<double> noise_work;  // <f dW, u> per step
    FirstHits hits;

    bool uniform_dt() const;
    double final_time() const { return records.empty() ? 0.0 : records.back().t; }
};

// One trajectory: operator-split loop
//   solve Poisson -> diagnostics/monitors -> fluxes -> sample noise ->
//   step ions -> step velocity
// deterministic in (config, seed, stream).
class Simulator {
public:
    Simulator(const SimConfig& cfg, uint64_t stream);

    const Grid& grid() const { return grid_; }
    const IonState& ions() const { return ions_; }
    const FluidState& fluid() const { return fluid_; }
    const ScalarField& psi() const { return psi_; }
    double t() const { return t_; }
    uint64_t step_index() const { return step_; }

    void refresh_potential();            // Poisson solve for the current charge
    DiagnosticsRecord diagnose() const;  // record at the current state
    double auto_dt() const;              // positivity + advective CFL bound
    double step(double dt);              // advances one step, returns noise work

    TrajectoryResult run();              // full loop with monitors and output

private:
    SimConfig cfg_;
    Grid grid_;
    uint64_t stream_;
    CounterRng rng_;
    IonState ions_;
    FluidState fluid_;
    ScalarField psi_;
    ScalarField rho_;
    BoundaryValues eta_;
    PoissonSolver psi_solver_;
    VelocitySolvers velocity_solvers_;
    std::unique_ptr<NoiseModel> noise_;
    double t_ = 0.0;
    uint64_t step_ = 0;
    double u4_running_ = 0.0;
    bool psi_fresh_ = false;

    void update_rho();
    void write_snapshots(uint64_t step) const;
};

TrajectoryResult run_simulation(const SimConfig& cfg, uint64_t stream = 0,
                                bool write_outputs = true);

struct MomentEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Mean of x^p over samples with its standard error.
MomentEstimate moment_estimate(const std::vector<double>& samples, double p);

struct FunctionalStats {
    std::string name;
    std::vector<double> samples;      // one per completed trajectory
    MomentEstimate first;             // p = 1
    std::vector<MomentEstimate> moments;  // per ensemble.p_list entry
};

struct EnsembleStats {
    int N = 0;
    int completed = 0;
    int monitor_stops = 0;
    int failures = 0;
    std::vector<double> p_list;
    std::vector<FunctionalStats> functionals;
    std::vector<std::string> failure_messages;

    const FunctionalStats* find(const std::string& name) const;
};

// N trajectories on streams 0..N-1 over a worker pool (NPNS_THREADS caps the
// worker count); the reduction is performed in stream order so results do not
// depend on scheduling. Failed trajectories are recorded and skipped in the
// statistics.
EnsembleStats run_ensemble(const SimConfig& cfg, bool write_outputs = true);

int ensemble_workers(int n_trajectories);

}  // namespace npns
