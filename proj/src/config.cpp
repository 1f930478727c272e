#include "qtraj/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qtraj {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Binder {
    std::map<std::string, std::function<bool(const std::string&)>> setters;

    void num(const std::string& key, double* dst) {
        setters[key] = [dst](const std::string& v) {
            try {
                std::size_t pos = 0;
                *dst = std::stod(v, &pos);
                return pos == v.size();
            } catch (...) {
                return false;
            }
        };
    }
    void integer(const std::string& key, int* dst) {
        setters[key] = [dst](const std::string& v) {
            try {
                std::size_t pos = 0;
                *dst = std::stoi(v, &pos);
                return pos == v.size();
            } catch (...) {
                return false;
            }
        };
    }
    void u64(const std::string& key, std::uint64_t* dst) {
        setters[key] = [dst](const std::string& v) {
            try {
                std::size_t pos = 0;
                *dst = std::stoull(v, &pos);
                return pos == v.size();
            } catch (...) {
                return false;
            }
        };
    }
    void str(const std::string& key, std::string* dst) {
        setters[key] = [dst](const std::string& v) {
            *dst = v;
            return true;
        };
    }
};

Binder make_binder(ExperimentConfig& c) {
    Binder b;
    b.str("experiment.kind", &c.kind);
    b.u64("experiment.seed", &c.seed);
    b.str("experiment.out", &c.out);
    b.integer("experiment.threads", &c.threads);

    b.num("system.hbar", &c.hbar);
    b.num("system.mass", &c.mass);
    b.num("system.L", &c.L);
    b.str("system.potential", &c.potential);
    b.num("system.v0", &c.v0);
    b.num("system.v1", &c.v1);
    b.num("system.q_step", &c.q_step);
    b.num("system.width", &c.width);
    b.num("system.slope", &c.slope);
    b.num("system.omega", &c.omega);

    b.str("state.kind", &c.state);
    b.num("state.q0", &c.q0);
    b.num("state.q0_2", &c.q0_2);
    b.num("state.p0", &c.p0);
    b.num("state.p0_2", &c.p0_2);
    b.num("state.sigma", &c.sigma);
    b.integer("state.mode_n", &c.mode_n);
    b.integer("state.mode_m", &c.mode_m);
    b.num("state.energy", &c.energy);

    b.integer("grid.n", &c.n);
    b.integer("grid.n2", &c.n2);
    b.num("grid.qmin", &c.qmin);
    b.num("grid.qmax", &c.qmax);
    b.str("grid.boundary", &c.boundary);
    b.integer("grid.n_max", &c.n_max);

    b.num("time.t0", &c.t0);
    b.num("time.t1", &c.t1);
    b.num("time.dt", &c.dt);
    b.num("time.dt_traj", &c.dt_traj);

    b.integer("particles.n", &c.n_particles);
    b.integer("particles.stride", &c.stride);

    b.num("lyapunov.delta0", &c.delta0);
    b.num("lyapunov.tau", &c.tau);

    b.num("dos.epsilon", &c.epsilon);
    b.num("dos.e_lo", &c.e_lo);
    b.num("dos.e_hi", &c.e_hi);
    b.integer("dos.n_e", &c.n_e);
    b.num("dos.ell_max", &c.ell_max);

    b.num("scan.lo", &c.scan_lo);
    b.num("scan.hi", &c.scan_hi);
    b.integer("scan.points", &c.scan_points);
    return b;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    Binder binder = make_binder(cfg);
    std::vector<std::string> errors;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = binder.setters.find(key);
        if (it == binder.setters.end()) {
            errors.push_back("unknown key '" + key + "' (line " + std::to_string(lineno) + ")");
        } else if (!it->second(value)) {
            errors.push_back("bad value for '" + key + "': '" + value + "' (line " +
                             std::to_string(lineno) + ")");
        }
    }
    if (!errors.empty()) {
        std::string msg = "config errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw std::invalid_argument(msg);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const ExperimentConfig& cfg) {
    static const std::set<std::string> kinds = {
        "evolve",       "bohm-trace",      "freeze-check",  "lyapunov",
        "wkb-compare",  "step-scan",       "dos",           "length-spectrum",
        "microcanonical", "bipolar-demo",  "perturbative-phase"};
    static const std::set<std::string> potentials = {"constant", "sharp-step", "soft-step",
                                                     "linear-ramp", "harmonic"};
    static const std::set<std::string> states = {"gaussian", "billiard-mode", "box-mode",
                                                 "plane-wave", "standing-wave"};
    std::vector<std::string> errors;
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) errors.push_back(what);
    };

    require(kinds.count(cfg.kind) > 0, "experiment.kind: unknown kind '" + cfg.kind + "'");
    require(potentials.count(cfg.potential) > 0,
            "system.potential: unknown potential '" + cfg.potential + "'");
    require(states.count(cfg.state) > 0, "state.kind: unknown state '" + cfg.state + "'");
    require(cfg.hbar > 0.0, "system.hbar must be positive");
    require(cfg.mass > 0.0, "system.mass must be positive");
    require(cfg.L > 0.0, "system.L must be positive");
    require(cfg.n >= 16, "grid.n must be >= 16");
    require(cfg.qmax > cfg.qmin, "grid.qmax must exceed grid.qmin");
    require(cfg.n_max >= 8, "grid.n_max must be >= 8");
    require(cfg.boundary == "auto" || cfg.boundary == "periodic" || cfg.boundary == "dirichlet",
            "grid.boundary must be auto, periodic or dirichlet");
    require(cfg.t1 > cfg.t0 || cfg.kind == "dos" || cfg.kind == "length-spectrum" ||
                cfg.kind == "microcanonical" || cfg.kind == "wkb-compare" ||
                cfg.kind == "step-scan" || cfg.kind == "freeze-check",
            "time.t1 must exceed time.t0");
    require(cfg.dt > 0.0, "time.dt must be positive");
    require(cfg.dt_traj > 0.0, "time.dt_traj must be positive");
    require(cfg.n_particles >= 1, "particles.n must be >= 1");
    require(cfg.stride >= 1, "particles.stride must be >= 1");
    require(cfg.delta0 > 0.0, "lyapunov.delta0 must be positive");
    require(cfg.tau > 0.0, "lyapunov.tau must be positive");
    require(cfg.epsilon > 0.0, "dos.epsilon must be positive");
    require(cfg.e_hi > cfg.e_lo, "dos.e_hi must exceed dos.e_lo");
    require(cfg.n_e >= 2, "dos.n_e must be >= 2");
    require(cfg.ell_max > 0.0, "dos.ell_max must be positive");
    require(cfg.scan_points >= 2, "scan.points must be >= 2");
    require(cfg.scan_hi > cfg.scan_lo && cfg.scan_lo > 0.0,
            "scan.lo/scan.hi must be positive and increasing");
    if (cfg.state == "gaussian") require(cfg.sigma > 0.0, "state.sigma must be positive");
    if (cfg.state == "billiard-mode" || cfg.state == "box-mode")
        require(cfg.mode_n >= 1 && cfg.mode_m >= 1, "state.mode_n/mode_m must be >= 1");

    if (!errors.empty()) {
        std::string msg = "validation failed:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw std::invalid_argument(msg);
    }
}

std::map<std::string, std::string> echo_config(const ExperimentConfig& cfg) {
    std::map<std::string, std::string> m;
    auto putd = [&](const std::string& k, double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        m[k] = os.str();
    };
    m["experiment.kind"] = cfg.kind;
    m["experiment.seed"] = std::to_string(cfg.seed);
    m["experiment.out"] = cfg.out;
    m["experiment.threads"] = std::to_string(cfg.threads);
    putd("system.hbar", cfg.hbar);
    putd("system.mass", cfg.mass);
    putd("system.L", cfg.L);
    m["system.potential"] = cfg.potential;
    putd("system.v0", cfg.v0);
    putd("system.v1", cfg.v1);
    putd("system.q_step", cfg.q_step);
    putd("system.width", cfg.width);
    putd("system.slope", cfg.slope);
    putd("system.omega", cfg.omega);
    m["state.kind"] = cfg.state;
    putd("state.q0", cfg.q0);
    putd("state.q0_2", cfg.q0_2);
    putd("state.p0", cfg.p0);
    putd("state.p0_2", cfg.p0_2);
    putd("state.sigma", cfg.sigma);
    m["state.mode_n"] = std::to_string(cfg.mode_n);
    m["state.mode_m"] = std::to_string(cfg.mode_m);
    putd("state.energy", cfg.energy);
    m["grid.n"] = std::to_string(cfg.n);
    m["grid.n2"] = std::to_string(cfg.n2);
    putd("grid.qmin", cfg.qmin);
    putd("grid.qmax", cfg.qmax);
    m["grid.boundary"] = cfg.boundary;
    m["grid.n_max"] = std::to_string(cfg.n_max);
    putd("time.t0", cfg.t0);
    putd("time.t1", cfg.t1);
    putd("time.dt", cfg.dt);
    putd("time.dt_traj", cfg.dt_traj);
    m["particles.n"] = std::to_string(cfg.n_particles);
    m["particles.stride"] = std::to_string(cfg.stride);
    putd("lyapunov.delta0", cfg.delta0);
    putd("lyapunov.tau", cfg.tau);
    putd("dos.epsilon", cfg.epsilon);
    putd("dos.e_lo", cfg.e_lo);
    putd("dos.e_hi", cfg.e_hi);
    m["dos.n_e"] = std::to_string(cfg.n_e);
    putd("dos.ell_max", cfg.ell_max);
    putd("scan.lo", cfg.scan_lo);
    putd("scan.hi", cfg.scan_hi);
    m["scan.points"] = std::to_string(cfg.scan_points);
    return m;
}

} // namespace qtraj
