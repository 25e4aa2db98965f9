#include "npns/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "npns/ion_transport.hpp"

namespace npns {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config: " + path + ": " + msg);
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double pos(const json& j, const std::string& path) {
    const double v = num(j, path);
    if (!(v > 0.0)) fail(path, "must be positive");
    return v;
}

double nonneg(const json& j, const std::string& path) {
    const double v = num(j, path);
    if (!(v >= 0.0)) fail(path, "must be >= 0");
    return v;
}

ProfileConfig parse_profile(const json& j, const std::string& path) {
    ProfileConfig p;
    if (!j.is_object()) fail(path, "expected an object");
    p.kind = j.value("kind", "constant");
    if (p.kind == "constant") {
        if (j.contains("value")) p.value = nonneg(j["value"], path + ".value");
    } else if (p.kind == "gaussian") {
        if (j.contains("amplitude")) p.amplitude = nonneg(j["amplitude"], path + ".amplitude");
        if (j.contains("x0")) p.x0 = num(j["x0"], path + ".x0");
        if (j.contains("y0")) p.y0 = num(j["y0"], path + ".y0");
        if (j.contains("sigma")) p.sigma = pos(j["sigma"], path + ".sigma");
        if (j.contains("floor")) p.floor = nonneg(j["floor"], path + ".floor");
    } else {
        fail(path + ".kind", "unknown profile kind '" + p.kind + "'");
    }
    return p;
}

json profile_json(const ProfileConfig& p) {
    json j;
    j["kind"] = p.kind;
    if (p.kind == "constant") {
        j["value"] = p.value;
    } else {
        j["amplitude"] = p.amplitude;
        j["x0"] = p.x0;
        j["y0"] = p.y0;
        j["sigma"] = p.sigma;
        j["floor"] = p.floor;
    }
    return j;
}

}  // namespace

BoundaryValues SimConfig::make_eta(const Grid& g) const {
    return BoundaryValues(g, eta.value);
}

ScalarField SimConfig::initial_concentration(const Grid& g,
                                             const SpeciesConfig& sp) const {
    ScalarField c(g);
    if (sp.initial.kind == "constant") {
        for (double& v : c.v) v = sp.initial.value;
    } else {
        const double s2 = 2.0 * sp.initial.sigma * sp.initial.sigma;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double dx = g.xc(i) - sp.initial.x0;
                const double dy = g.yc(j) - sp.initial.y0;
                c(i, j) = sp.initial.floor +
                          sp.initial.amplitude * std::exp(-(dx * dx + dy * dy) / s2);
            }
    }
    return c;
}

VectorField SimConfig::initial_u(const Grid& g) const {
    VectorField u(g);
    if (initial_velocity.kind == "zero" || initial_velocity.amplitude == 0.0)
        return u;
    constexpr double kPi = 3.14159265358979323846264338327950288;
    const double kx = initial_velocity.mx * kPi / g.Lx;
    const double ky = initial_velocity.my * kPi / g.Ly;
    const double A = initial_velocity.amplitude;
    auto stream = [&](int i, int j) {
        return A * std::sin(kx * i * g.hx()) * std::sin(ky * j * g.hy());
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            u.x(i, j) = (stream(i, j + 1) - stream(i, j)) / g.hy();
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u.y(i, j) = -(stream(i + 1, j) - stream(i, j)) / g.hx();
    return u;
}

SimConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    SimConfig cfg;
    if (j.contains("grid")) {
        const json& g = j["grid"];
        cfg.nx = static_cast<int>(num(g.value("nx", json(32)), "grid.nx"));
        cfg.ny = static_cast<int>(num(g.value("ny", json(32)), "grid.ny"));
        cfg.Lx = pos(g.value("Lx", json(1.0)), "grid.Lx");
        cfg.Ly = pos(g.value("Ly", json(1.0)), "grid.Ly");
        if (cfg.nx < 4 || cfg.ny < 4) fail("grid", "nx and ny must be >= 4");
    }

    const json& ph = j.contains("physics") ? j["physics"] : json::object();
    cfg.mu = pos(ph.value("mu", json(1.0)), "physics.mu");
    cfg.kappa = num(ph.value("kappa", json(1.0)), "physics.kappa");
    cfg.varsigma = nonneg(ph.value("varsigma", json(1.0)), "physics.varsigma");
    cfg.evolve_fluid = ph.value("evolve_fluid", true);
    if (ph.contains("eta")) {
        const json& e = ph["eta"];
        cfg.eta.kind = e.value("kind", "constant");
        if (cfg.eta.kind != "constant" && cfg.eta.kind != "zero")
            fail("physics.eta.kind", "unknown kind");
        cfg.eta.value = cfg.eta.kind == "zero" ? 0.0 : num(e.value("value", json(0.0)), "physics.eta.value");
        cfg.eta.kind = "constant";
    }
    if (ph.contains("initial_velocity")) {
        const json& v = ph["initial_velocity"];
        cfg.initial_velocity.kind = v.value("kind", "zero");
        if (cfg.initial_velocity.kind != "zero" && cfg.initial_velocity.kind != "stream")
            fail("physics.initial_velocity.kind", "unknown kind");
        cfg.initial_velocity.amplitude = num(v.value("amplitude", json(0.0)),
                                             "physics.initial_velocity.amplitude");
        cfg.initial_velocity.mx = static_cast<int>(num(v.value("mx", json(1)), "mx"));
        cfg.initial_velocity.my = static_cast<int>(num(v.value("my", json(1)), "my"));
    }
    if (!ph.contains("species") || !ph["species"].is_array() || ph["species"].empty())
        fail("physics.species", "at least one species is required");
    for (size_t i = 0; i < ph["species"].size(); ++i) {
        const json& s = ph["species"][i];
        const std::string path = "physics.species[" + std::to_string(i) + "]";
        SpeciesConfig sp;
        sp.z = num(s.value("z", json(1.0)), path + ".z");
        sp.a = pos(s.value("a", json(1.0)), path + ".a");
        if (s.contains("initial")) sp.initial = parse_profile(s["initial"], path + ".initial");
        cfg.species.push_back(sp);
    }

    if (j.contains("time")) {
        const json& t = j["time"];
        if (t.contains("dt")) {
            if (t["dt"].is_string()) {
                if (t["dt"] != "auto") fail("time.dt", "expected a number or \"auto\"");
                cfg.time.dt = 0.0;
            } else {
                cfg.time.dt = nonneg(t["dt"], "time.dt");
            }
        }
        cfg.time.T = pos(t.value("T", json(1.0)), "time.T");
    }

    if (j.contains("noise")) {
        const json& n = j["noise"];
        cfg.noise.enabled = n.value("enabled", true);
        cfg.noise.spec.K = static_cast<int>(num(n.value("K", json(16)), "noise.K"));
        cfg.noise.spec.sigma0 = nonneg(n.value("sigma0", json(0.5)), "noise.sigma0");
        cfg.noise.spec.q = num(n.value("q", json(1.0)), "noise.q");
        cfg.noise.spec.alpha_u = num(n.value("alpha_u", json(1.0)), "noise.alpha_u");
        cfg.noise.spec.alpha_E = num(n.value("alpha_E", json(1.0)), "noise.alpha_E");
        cfg.noise.spec.mode_family = n.value("mode_family", "cosine");
        if (cfg.noise.enabled) {
            if (cfg.noise.spec.K < 1) fail("noise.K", "must be >= 1");
            if (!(cfg.noise.spec.q > 0.5))
                fail("noise.q", "must exceed 1/2 (square-summable mode weights)");
        }
    }

    if (j.contains("truncation")) {
        const json& t = j["truncation"];
        if (t.contains("R_u")) cfg.truncation.R_u = pos(t["R_u"], "truncation.R_u");
        if (t.contains("R_psi")) cfg.truncation.R_psi = pos(t["R_psi"], "truncation.R_psi");
    }
    if (j.contains("mollifier") && j["mollifier"].contains("eps"))
        cfg.mollifier_eps = pos(j["mollifier"]["eps"], "mollifier.eps");

    if (j.contains("monitors") && j["monitors"].contains("thresholds")) {
        const json& m = j["monitors"]["thresholds"];
        auto get = [&](const char* key, double& slot) {
            if (m.contains(key)) slot = pos(m[key], std::string("monitors.thresholds.") + key);
        };
        get("u_h1", cfg.monitors.u_h1);
        get("c_h1", cfg.monitors.c_h1);
        get("grad_u_l2", cfg.monitors.grad_u_l2);
        get("grad_psi_w13p", cfg.monitors.grad_psi_w13p);
        get("u4_running", cfg.monitors.u4_running);
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        cfg.output.directory = o.value("directory", "out");
        cfg.output.snapshot_every = static_cast<int>(num(o.value("snapshot_every", json(0)),
                                                         "output.snapshot_every"));
        cfg.output.csv = o.value("csv", true);
        if (cfg.output.snapshot_every < 0) fail("output.snapshot_every", "must be >= 0");
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            fail("seed", "expected an integer");
        cfg.seed = j["seed"].get<uint64_t>();
    }

    if (j.contains("ensemble")) {
        const json& e = j["ensemble"];
        cfg.ensemble.N = static_cast<int>(num(e.value("N", json(1)), "ensemble.N"));
        if (cfg.ensemble.N < 1) fail("ensemble.N", "must be >= 1");
        if (e.contains("p_list")) {
            cfg.ensemble.p_list.clear();
            for (const auto& p : e["p_list"]) {
                const double v = num(p, "ensemble.p_list");
                if (!(v >= 1.0)) fail("ensemble.p_list", "exponents must be >= 1");
                cfg.ensemble.p_list.push_back(v);
            }
        }
    }

    // downstream preconditions checked up front
    try {
        const Grid g = cfg.make_grid();
        if (cfg.noise.enabled) NoiseModel probe(g, cfg.noise.spec);
        if (cfg.varsigma == 0.0) {
            ScalarField rho(g);
            IonState ions;
            for (const auto& sp : cfg.species) {
                IonSpecies s{sp.z, sp.a, cfg.initial_concentration(g, sp)};
                for (size_t k = 0; k < rho.v.size(); ++k) rho.v[k] += s.z * s.c.v[k];
                ions.species.push_back(std::move(s));
            }
            const double defect =
                PoissonSolver::compatibility_defect(rho, cfg.make_eta(g), g);
            const double scale = l1_norm(rho) + boundary_l1(cfg.make_eta(g), g);
            if (scale > 0.0 && std::abs(defect) > 1e-10 * scale)
                fail("physics", "varsigma = 0 needs compatible data: total charge "
                                "plus boundary flux must vanish (defect " +
                                    std::to_string(defect) + ")");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const SimConfig& cfg) {
    json j;
    j["grid"] = {{"nx", cfg.nx}, {"ny", cfg.ny}, {"Lx", cfg.Lx}, {"Ly", cfg.Ly}};
    json species = json::array();
    for (const auto& sp : cfg.species)
        species.push_back({{"z", sp.z}, {"a", sp.a}, {"initial", profile_json(sp.initial)}});
    j["physics"] = {{"mu", cfg.mu},
                    {"kappa", cfg.kappa},
                    {"varsigma", cfg.varsigma},
                    {"evolve_fluid", cfg.evolve_fluid},
                    {"eta", {{"kind", "constant"}, {"value", cfg.eta.value}}},
                    {"initial_velocity",
                     {{"kind", cfg.initial_velocity.kind},
                      {"amplitude", cfg.initial_velocity.amplitude},
                      {"mx", cfg.initial_velocity.mx},
                      {"my", cfg.initial_velocity.my}}},
                    {"species", species}};
    if (cfg.time.dt > 0.0)
        j["time"] = {{"dt", cfg.time.dt}, {"T", cfg.time.T}};
    else
        j["time"] = {{"dt", "auto"}, {"T", cfg.time.T}};
    j["noise"] = {{"enabled", cfg.noise.enabled},
                  {"K", cfg.noise.spec.K},
                  {"sigma0", cfg.noise.spec.sigma0},
                  {"q", cfg.noise.spec.q},
                  {"alpha_u", cfg.noise.spec.alpha_u},
                  {"alpha_E", cfg.noise.spec.alpha_E},
                  {"mode_family", cfg.noise.spec.mode_family}};
    json trunc = json::object();
    if (cfg.truncation.R_u) trunc["R_u"] = *cfg.truncation.R_u;
    if (cfg.truncation.R_psi) trunc["R_psi"] = *cfg.truncation.R_psi;
    if (!trunc.empty()) j["truncation"] = trunc;
    if (cfg.mollifier_eps) j["mollifier"] = {{"eps", *cfg.mollifier_eps}};
    json th = json::object();
    auto put_th = [&](const char* key, double v) {
        if (std::isfinite(v)) th[key] = v;
    };
    put_th("u_h1", cfg.monitors.u_h1);
    put_th("c_h1", cfg.monitors.c_h1);
    put_th("grad_u_l2", cfg.monitors.grad_u_l2);
    put_th("grad_psi_w13p", cfg.monitors.grad_psi_w13p);
    put_th("u4_running", cfg.monitors.u4_running);
    if (!th.empty()) j["monitors"] = {{"thresholds", th}};
    j["output"] = {{"directory", cfg.output.directory},
                   {"snapshot_every", cfg.output.snapshot_every},
                   {"csv", cfg.output.csv}};
    j["seed"] = cfg.seed;
    j["ensemble"] = {{"N", cfg.ensemble.N}, {"p_list", cfg.ensemble.p_list}};
    return j.dump(2);
}

std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "' is not key=value");
        const std::string path = ov.substr(0, eq);
        const std::string raw = ov.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (...) {
            value = raw;  // bare string
        }
        json* node = &j;
        size_t begin = 0;
        while (true) {
            const size_t dot = path.find('.', begin);
            const std::string key = path.substr(begin, dot - begin);
            if (key.empty()) throw ConfigError("override '" + ov + "': empty key");
            if (dot == std::string::npos) {
                (*node)[key] = value;
                break;
            }
            node = &(*node)[key];
            begin = dot + 1;
        }
    }
    return j.dump();
}

}  // namespace npns
