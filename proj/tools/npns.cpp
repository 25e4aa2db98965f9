// npns command line: single runs, Monte-Carlo ensembles, noise assumption
// checks, and the manufactured-solution convergence suite.
//
// Exit codes: 0 ok, 2 config error, 3 solver error, 4 monitor-triggered stop.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "npns/config.hpp"
#include "npns/simulation.hpp"
#include "npns/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMonitor = 4;

npns::SimConfig load(const std::string& path, const std::vector<std::string>& sets) {
    std::ifstream in(path);
    if (!in) throw npns::ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (!sets.empty()) text = npns::apply_overrides(text, sets);
    return npns::parse_config(text);
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& sets) {
    const npns::SimConfig cfg = load(config_path, sets);
    const npns::TrajectoryResult r = npns::run_simulation(cfg, 0);
    std::printf("steps=%zu t_final=%.6g status=%s\n", r.steps, r.final_time(),
                r.status == npns::RunStatus::Completed ? "completed"
                : r.status == npns::RunStatus::MonitorStop ? "monitor-stop"
                                                           : "failed");
    if (!r.message.empty()) std::printf("%s\n", r.message.c_str());
    if (!r.records.empty()) {
        const auto& last = r.records.back();
        std::printf("E=%.12g dissipation=%.12g", last.total_energy(), last.dissipation);
        for (size_t i = 0; i < last.masses.size(); ++i)
            std::printf(" mass_c%zu=%.12g", i + 1, last.masses[i]);
        std::printf("\n");
    }
    switch (r.status) {
        case npns::RunStatus::Completed: return kExitOk;
        case npns::RunStatus::MonitorStop: return kExitMonitor;
        case npns::RunStatus::Failed: return kExitSolver;
    }
    return kExitSolver;
}

int cmd_ensemble(const std::string& config_path, const std::vector<std::string>& sets) {
    const npns::SimConfig cfg = load(config_path, sets);
    const npns::EnsembleStats stats = npns::run_ensemble(cfg);
    std::printf("trajectories=%d completed=%d monitor_stops=%d failures=%d workers<=%d\n",
                stats.N, stats.completed, stats.monitor_stops, stats.failures,
                npns::ensemble_workers(stats.N));
    for (const auto& f : stats.functionals) {
        std::printf("%-24s mean=%.8g stderr=%.3g n=%zu", f.name.c_str(), f.first.mean,
                    f.first.stderr_, f.samples.size());
        for (size_t k = 0; k < f.moments.size(); ++k)
            std::printf("  E[x^%g]=%.8g(%.3g)", stats.p_list[k], f.moments[k].mean,
                        f.moments[k].stderr_);
        std::printf("\n");
    }
    for (const auto& msg : stats.failure_messages)
        std::printf("failure: %s\n", msg.c_str());
    if (stats.completed + stats.monitor_stops == 0) return kExitSolver;
    return kExitOk;
}

int cmd_verify_noise(const std::string& config_path, int samples,
                     const std::vector<std::string>& sets) {
    const npns::SimConfig cfg = load(config_path, sets);
    const npns::Grid g = cfg.make_grid();
    const npns::NoiseModel model(g, cfg.noise.spec);
    const npns::AssumptionReport rep = npns::verify_assumptions(model, samples);
    std::printf("samples=%d\n", rep.samples);
    std::printf("growth   L2: sup ratio %.6g  <=  ell1 %.6g\n", rep.ell1_hat, rep.ell1);
    std::printf("lipschitz L2: sup ratio %.6g  <=  ell2 %.6g\n", rep.ell2_hat, rep.ell2);
    std::printf("growth   H1: sup ratio %.6g  <=  ell3 %.6g\n", rep.ell3_hat, rep.ell3);
    std::printf("lipschitz H1: sup ratio %.6g  <=  ell4 %.6g\n", rep.ell4_hat, rep.ell4);
    std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
    return rep.pass ? kExitOk : kExitSolver;
}

void print_mms(const char* name, const npns::MmsErrors& e) {
    std::printf("%s\n", name);
    const auto ratios = e.ratios();
    for (size_t k = 0; k < e.errors.size(); ++k) {
        std::printf("  n=%4d  error=%.6e", e.grids[k], e.errors[k]);
        if (k > 0) std::printf("  ratio=%.3f", ratios[k - 1]);
        std::printf("\n");
    }
}

int cmd_mms(const std::vector<int>& grids) {
    const auto robin = npns::poisson_mms(1.0, grids);
    const auto neumann = npns::poisson_mms(0.0, grids);
    const auto grad = npns::gradient_mms(grids);
    const auto div = npns::divergence_mms(grids);
    print_mms("poisson Robin (varsigma=1)", robin);
    print_mms("poisson Neumann (varsigma=0)", neumann);
    print_mms("gradient (max norm)", grad);
    print_mms("divergence of gradient (interior L2)", div);
    bool ok = true;
    for (const auto* e : {&robin, &neumann, &grad, &div})
        for (double r : e->ratios()) ok = ok && r >= 3.7;
    std::printf("%s\n", ok ? "PASS (all ratios >= 3.7)" : "FAIL (ratio below 3.7)");
    return ok ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic Nernst-Planck-Navier-Stokes simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    int samples = 1000;
    std::vector<int> grids = {32, 64, 128};

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("config", config_path, "JSON config file")->required();
        sub->add_option("--set", sets,
                        "override a config key, e.g. --set time.T=0.5")
            ->take_all();
    };

    CLI::App* run = app.add_subcommand("run", "run a single trajectory");
    add_common(run, true);
    CLI::App* ens = app.add_subcommand("ensemble", "run an ensemble of trajectories");
    add_common(ens, true);
    CLI::App* ver = app.add_subcommand("verify-noise",
                                       "check the noise growth/Lipschitz assumptions");
    add_common(ver, true);
    ver->add_option("--samples", samples, "random field pairs to draw");
    CLI::App* mms = app.add_subcommand("mms", "manufactured-solution convergence suite");
    mms->add_option("--grids", grids, "grid sizes, e.g. --grids 32 64 128")->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, sets);
        if (ens->parsed()) return cmd_ensemble(config_path, sets);
        if (ver->parsed()) return cmd_verify_noise(config_path, samples, sets);
        if (mms->parsed()) return cmd_mms(grids);
    } catch (const npns::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    } catch (const npns::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitSolver;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return kExitSolver;
    }
    return kExitOk;
}
