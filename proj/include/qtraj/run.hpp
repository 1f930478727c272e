#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qtraj/config.hpp"

namespace qtraj {

struct RunManifest {
    std::map<std::string, std::string> config_echo;
    std::map<std::string, std::string> summary;          // scalar results
    std::map<std::string, std::uint64_t> checksums;      // data file -> FNV-1a 64
    double wall_seconds = 0.0;
    std::string version;

    std::string to_json() const;
};

// Executes the configured experiment, writing all data files plus
// manifest.json into cfg.out.  Partial outputs are removed on abort.
// Identical config + seed produces identical data checksums.
RunManifest run(const ExperimentConfig& cfg);

} // namespace qtraj
