#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npns/grid.hpp"
#include "npns/noise.hpp"
#include "npns/regularization.hpp"

namespace npns {

struct ProfileConfig {
    std::string kind = "constant";  // constant | gaussian
    double value = 1.0;             // constant level
    double amplitude = 1.0;         // gaussian peak above the floor
    double x0 = 0.5, y0 = 0.5;      // gaussian center
    double sigma = 0.1;             // gaussian width
    double floor = 0.0;             // additive background
};

struct SpeciesConfig {
    double z = 1.0;
    double a = 1.0;
    ProfileConfig initial;
};

struct EtaConfig {
    std::string kind = "constant";  // constant only, value 0 = grounded walls
    double value = 0.0;
};

struct VelocityConfig {
    std::string kind = "zero";  // zero | stream (sin-sin corner stream function)
    double amplitude = 0.0;
    int mx = 1, my = 1;
};

struct TimeConfig {
    double dt = 0.0;  // 0 means automatic (positivity/CFL-limited)
    double T = 1.0;
};

struct NoiseConfigBlock {
    bool enabled = false;
    NoiseSpec spec;
};

struct OutputConfig {
    std::string directory = "out";
    int snapshot_every = 0;  // steps between field snapshots, 0 = off
    bool csv = true;
};

struct EnsembleConfig {
    int N = 1;
    std::vector<double> p_list = {2.0, 4.0};
};

struct SimConfig {
    int nx = 32, ny = 32;
    double Lx = 1.0, Ly = 1.0;

    double mu = 1.0;
    double kappa = 1.0;
    double varsigma = 1.0;
    std::vector<SpeciesConfig> species;
    EtaConfig eta;
    VelocityConfig initial_velocity;
    bool evolve_fluid = true;

    TimeConfig time;
    NoiseConfigBlock noise;
    TruncationSpec truncation;
    std::optional<double> mollifier_eps;
    MonitorThresholds monitors;
    OutputConfig output;
    uint64_t seed = 42;
    EnsembleConfig ensemble;

    Grid make_grid() const { return Grid(nx, ny, Lx, Ly); }
    BoundaryValues make_eta(const Grid& g) const;
    ScalarField initial_concentration(const Grid& g, const SpeciesConfig& sp) const;
    VectorField initial_u(const Grid& g) const;
};

/// Parse + validate a config (throws ConfigError with a field path).
SimConfig parse_config(const std::string& json_text);
SimConfig load_config_file(const std::string& path);

/// Canonical serialization; parse(serialize(parse(t))) == parse(t).
std::string serialize_config(const SimConfig& cfg);

// "a.b.c=value" override applied to the JSON tree before parsing; value is
// parsed as JSON when possible, else taken as a string.
std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides);

}  // namespace npns
