#include "npns/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "npns/field_io.hpp"

namespace npns {

bool TrajectoryResult::uniform_dt() const {
    if (records.size() < 3) return true;
    const double dt = records[1].t - records[0].t;
    for (size_t n = 1; n + 1 < records.size(); ++n)
        if (std::abs(records[n + 1].t - records[n].t - dt) > 1e-9 * dt) return false;
    return true;
}

Simulator::Simulator(const SimConfig& cfg, uint64_t stream)
    : cfg_(cfg),
      grid_(cfg.make_grid()),
      stream_(stream),
      rng_(cfg.seed, stream),
      psi_(grid_),
      rho_(grid_),
      eta_(cfg.make_eta(grid_)),
      psi_solver_(grid_, cfg.varsigma, cfg.make_eta(grid_)),
      velocity_solvers_(grid_) {
    for (const auto& sp : cfg_.species)
        ions_.species.push_back({sp.z, sp.a, cfg_.initial_concentration(grid_, sp)});
    fluid_.u = cfg_.initial_u(grid_);
    fluid_.p = ScalarField(grid_);
    fluid_.mu = cfg_.mu;
    fluid_.kappa = cfg_.kappa;
    if (cfg_.noise.enabled)
        noise_ = std::make_unique<NoiseModel>(grid_, cfg_.noise.spec);
}

void Simulator::update_rho() {
    std::fill(rho_.v.begin(), rho_.v.end(), 0.0);
    for (const IonSpecies& sp : ions_.species)
        for (size_t k = 0; k < rho_.v.size(); ++k) rho_.v[k] += sp.z * sp.c.v[k];
}

void Simulator::refresh_potential() {
    update_rho();
    psi_ = psi_solver_.solve(rho_);
    psi_fresh_ = true;
}

DiagnosticsRecord Simulator::diagnose() const {
    double ito = 0.0;
    if (noise_) {
        const VectorField gp = gradient(psi_, psi_solver_.boundary_rule());
        ito = 0.5 * noise_->hs_norm_sq(fluid_.u, gp);
    }
    return npns::diagnose(t_, fluid_.u, ions_, psi_, eta_, cfg_.varsigma, cfg_.mu,
                          ito, u4_running_);
}

double Simulator::auto_dt() const {
    TransportFactors f;
    if (cfg_.truncation.R_u || cfg_.truncation.R_psi) {
        const BlowupIndicators b = blowup_indicators(fluid_.u, ions_, psi_);
        f = truncation_factors(cfg_.truncation, b.grad_u_l2, b.grad_psi_w13p);
    }
    const ScalarField& drift_psi = psi_;
    double dt = dt_max_ions(ions_, fluid_.u, drift_psi, f);
    if (cfg_.evolve_fluid) {
        const double umax = max_norm(fluid_.u);
        if (umax > 0.0)
            dt = std::min(dt, 0.45 * std::min(grid_.hx(), grid_.hy()) / umax);
    }
    if (!std::isfinite(dt)) dt = cfg_.time.T;  // nothing moves
    return dt;
}

double Simulator::step(double dt) {
    if (!psi_fresh_) refresh_potential();

    TransportFactors factors;
    if (cfg_.truncation.R_u || cfg_.truncation.R_psi) {
        const BlowupIndicators b = blowup_indicators(fluid_.u, ions_, psi_);
        factors = truncation_factors(cfg_.truncation, b.grad_u_l2, b.grad_psi_w13p);
    }

    // mollified potential feeds the drift and Coulomb terms when configured
    const ScalarField* drift_psi = &psi_;
    ScalarField psi_smooth;
    if (cfg_.mollifier_eps) {
        psi_smooth = mollify(psi_, *cfg_.mollifier_eps);
        drift_psi = &psi_smooth;
    }

    double work = 0.0;
    VectorField noise_inc(grid_);
    if (noise_) {
        const VectorField gp = gradient(psi_, psi_solver_.boundary_rule());
        const WienerIncrement dw = noise_->sample_increment(rng_, step_, dt);
        noise_inc = noise_->apply(fluid_.u, gp, dw);
        work = inner(noise_inc, fluid_.u);
    }

    u4_running_ += grad_norm_sq_noslip(fluid_.u) * l2_norm_sq(fluid_.u) * dt;

    step_ions(ions_, fluid_.u, *drift_psi, dt, factors);

    if (cfg_.evolve_fluid) {
        VectorField force = coulomb_force(rho_, *drift_psi, cfg_.kappa);
        if (factors.phi_drift != 1.0) {
            for (double& v : force.ux) v *= factors.phi_drift;
            for (double& v : force.uy) v *= factors.phi_drift;
        }
        step_velocity(fluid_, force, noise_inc, dt, velocity_solvers_, factors.phi_adv);
    }

    t_ += dt;
    ++step_;
    psi_fresh_ = false;

    for (const IonSpecies& sp : ions_.species)
        if (!sp.c.all_finite())
            throw Error("poisoned state: non-finite concentration at step " +
                        std::to_string(step_));
    if (!fluid_.u.all_finite())
        throw Error("poisoned state: non-finite velocity at step " +
                    std::to_string(step_));
    return work;
}

void Simulator::write_snapshots(uint64_t step) const {
    namespace fs = std::filesystem;
    char tag[32];
    std::snprintf(tag, sizeof(tag), "%08llu", static_cast<unsigned long long>(step));
    const std::string dir = cfg_.output.directory + "/stream" + std::to_string(stream_);
    fs::create_directories(dir);
    const std::string stem = dir + "/snap_" + tag;
    write_snapshot(stem + "_psi.npns", psi_, t_);
    write_snapshot(stem + "_u.npns", fluid_.u, t_);
    for (size_t i = 0; i < ions_.species.size(); ++i)
        write_snapshot(stem + "_c" + std::to_string(i + 1) + ".npns",
                       ions_.species[i].c, t_);
}

TrajectoryResult Simulator::run() {
    TrajectoryResult out;
    out.stream = stream_;
    const double T = cfg_.time.T;
    const bool fixed_dt = cfg_.time.dt > 0.0;
    const uint64_t fixed_steps =
        fixed_dt ? static_cast<uint64_t>(std::llround(T / cfg_.time.dt)) : 0;

    try {
        while (true) {
            refresh_potential();
            DiagnosticsRecord rec = diagnose();
            out.records.push_back(rec);
            update_hits(out.hits, rec, out.records.size() - 1, cfg_.monitors);
            if (out.hits.any()) {
                out.status = RunStatus::MonitorStop;
                out.message = std::string("monitor '") + out.hits.which() +
                              "' triggered at step " +
                              std::to_string(*out.hits.earliest());
                break;
            }
            if (cfg_.output.snapshot_every > 0 &&
                step_ % static_cast<uint64_t>(cfg_.output.snapshot_every) == 0)
                write_snapshots(step_);

            const bool done = fixed_dt ? step_ >= fixed_steps : t_ >= T - 1e-12 * T;
            if (done) {
                out.status = RunStatus::Completed;
                break;
            }
            double dt = fixed_dt ? cfg_.time.dt : std::min(auto_dt(), T - t_);
            out.noise_work.push_back(step(dt));
            ++out.steps;
        }
    } catch (const Error& e) {
        out.status = RunStatus::Failed;
        out.message = e.what();
    }
    return out;
}

TrajectoryResult run_simulation(const SimConfig& cfg, uint64_t stream,
                                bool write_outputs) {
    Simulator sim(cfg, stream);
    TrajectoryResult out = sim.run();
    if (write_outputs && cfg.output.csv) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.output.directory);
        char name[64];
        std::snprintf(name, sizeof(name), "traj_%03llu.csv",
                      static_cast<unsigned long long>(stream));
        std::ofstream csv(cfg.output.directory + "/" + name);
        write_csv(csv, out.records, static_cast<int>(cfg.species.size()));
    }
    return out;
}

MomentEstimate moment_estimate(const std::vector<double>& samples, double p) {
    if (samples.empty())
        throw DomainError("moment_estimate: empty sample set");
    if (!(p >= 1.0)) throw DomainError("moment_estimate: p must be >= 1");
    MomentEstimate est;
    std::vector<double> powered(samples.size());
    for (size_t k = 0; k < samples.size(); ++k) powered[k] = std::pow(samples[k], p);
    double mean = 0.0;
    for (double x : powered) mean += x;
    mean /= static_cast<double>(powered.size());
    est.mean = mean;
    if (powered.size() >= 2) {
        double var = 0.0;
        for (double x : powered) var += (x - mean) * (x - mean);
        var /= static_cast<double>(powered.size() - 1);
        est.stderr_ = std::sqrt(var / static_cast<double>(powered.size()));
    }
    return est;
}

const FunctionalStats* EnsembleStats::find(const std::string& name) const {
    for (const auto& f : functionals)
        if (f.name == name) return &f;
    return nullptr;
}

int ensemble_workers(int n_trajectories) {
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (const char* env = std::getenv("NPNS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) workers = std::min(workers, cap);
    }
    return std::min(workers, std::max(1, n_trajectories));
}

EnsembleStats run_ensemble(const SimConfig& cfg, bool write_outputs) {
    const int N = cfg.ensemble.N;
    if (N < 1) throw ConfigError("run_ensemble: ensemble.N must be >= 1");

    std::vector<TrajectoryResult> results(static_cast<size_t>(N));
    std::atomic<int> next{0};
    const int workers = ensemble_workers(N);
    auto worker = [&]() {
        while (true) {
            const int idx = next.fetch_add(1);
            if (idx >= N) return;
            try {
                results[static_cast<size_t>(idx)] =
                    run_simulation(cfg, static_cast<uint64_t>(idx), write_outputs);
            } catch (const std::exception& e) {
                // crash isolation: a broken trajectory never touches the others
                results[static_cast<size_t>(idx)].status = RunStatus::Failed;
                results[static_cast<size_t>(idx)].stream = static_cast<uint64_t>(idx);
                results[static_cast<size_t>(idx)].message = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    EnsembleStats stats;
    stats.N = N;
    stats.p_list = cfg.ensemble.p_list;

    FunctionalStats sup_u_l2{"sup_u_l2", {}, {}, {}};
    FunctionalStats sup_c_l2{"sup_c_l2", {}, {}, {}};
    FunctionalStats sup_energy{"sup_free_energy", {}, {}, {}};
    FunctionalStats sup_grad_u{"sup_grad_u_l2", {}, {}, {}};
    FunctionalStats sup_gpsi{"sup_grad_psi_w13p", {}, {}, {}};
    FunctionalStats sup_u_h1{"sup_u_h1", {}, {}, {}};
    FunctionalStats sup_c_h1{"sup_c_h1", {}, {}, {}};
    FunctionalStats final_u4{"final_u4_running", {}, {}, {}};
    FunctionalStats residual{"energy_balance_residual", {}, {}, {}};

    for (const TrajectoryResult& r : results) {
        switch (r.status) {
            case RunStatus::Completed: ++stats.completed; break;
            case RunStatus::MonitorStop: ++stats.monitor_stops; break;
            case RunStatus::Failed:
                ++stats.failures;
                stats.failure_messages.push_back(
                    "stream " + std::to_string(r.stream) + ": " + r.message);
                continue;
        }
        double su = 0.0, sc = 0.0, se = 0.0, sgu = 0.0, sgp = 0.0, suh = 0.0, sch = 0.0;
        for (const auto& rec : r.records) {
            su = std::max(su, std::sqrt(2.0 * rec.kinetic));
            for (const auto& lj : rec.lj_norms) sc = std::max(sc, lj[1]);  // L2 entry
            se = std::max(se, rec.total_energy());
            sgu = std::max(sgu, rec.grad_u_l2);
            sgp = std::max(sgp, rec.grad_psi_w13p);
            suh = std::max(suh, rec.u_h1);
            for (double v : rec.c_h1) sch = std::max(sch, v);
        }
        sup_u_l2.samples.push_back(su);
        sup_c_l2.samples.push_back(sc);
        sup_energy.samples.push_back(se);
        sup_grad_u.samples.push_back(sgu);
        sup_gpsi.samples.push_back(sgp);
        sup_u_h1.samples.push_back(suh);
        sup_c_h1.samples.push_back(sch);
        final_u4.samples.push_back(r.records.empty() ? 0.0 : r.records.back().u4_running);
        if (r.uniform_dt() && r.noise_work.size() + 1 == r.records.size() &&
            r.records.size() >= 2)
            residual.samples.push_back(energy_balance_residual(r.records, r.noise_work));
    }

    auto finalize = [&](FunctionalStats& f) {
        if (f.samples.empty()) return;
        f.first = moment_estimate(f.samples, 1.0);
        for (double p : stats.p_list) {
            // residuals may be negative; power moments apply to the sup
            // functionals only
            if (f.name == "energy_balance_residual") {
                f.moments.push_back(f.first);
                continue;
            }
            f.moments.push_back(moment_estimate(f.samples, p));
        }
        stats.functionals.push_back(std::move(f));
    };
    finalize(sup_u_l2);
    finalize(sup_c_l2);
    finalize(sup_energy);
    finalize(sup_grad_u);
    finalize(sup_gpsi);
    finalize(sup_u_h1);
    finalize(sup_c_h1);
    finalize(final_u4);
    finalize(residual);
    return stats;
}

}  // namespace npns
