#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "qtraj/config.hpp"
#include "qtraj/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Bohmian trajectory / semiclassics experiment runner"};

    std::string config_path, out_dir;
    int threads = -1;
    std::uint64_t seed = 0;
    bool seed_set = false, dry_run = false;

    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--threads", threads, "worker thread cap (overrides config)");
    app.add_option("--seed", seed, "RNG seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_flag("--dry-run", dry_run, "validate the config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    qtraj::ExperimentConfig cfg;
    try {
        cfg = qtraj::load_config(config_path);
        if (!out_dir.empty()) cfg.out = out_dir;
        if (threads >= 0) cfg.threads = threads;
        if (seed_set) cfg.seed = seed;
        qtraj::validate_config(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (dry_run) {
        std::cout << "config ok: " << cfg.kind << "\n";
        return 0;
    }

    try {
        const qtraj::RunManifest man = qtraj::run(cfg);
        std::cout << man.to_json();
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "aborted: " << e.what() << "\n";
        return 3;
    }
}
