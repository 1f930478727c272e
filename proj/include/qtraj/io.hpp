#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qtraj/bohm.hpp"
#include "qtraj/madelung.hpp"
#include "qtraj/propagator.hpp"
#include "qtraj/wavefield.hpp"

namespace qtraj {

// Binary field dump, little-endian:
//   magic "QTRAJFLD", i64 dim, i64 n0, i64 n1, i64 boundary,
//   f64 qmin0 qmax0 qmin1 qmax1 hbar mass time,
//   then n0*n1 interleaved f64 (re, im) pairs, row-major.
void dump_field(const WaveField& f, const std::filesystem::path& path);
WaveField load_field(const std::filesystem::path& path);

// Columnar text exports (q [, q2], ...) for plotting.
void export_field_text(const WaveField& f, const std::filesystem::path& path);
void export_flow_text(const FlowSnapshot& s, const std::filesystem::path& path);
void export_trajectories_text(const TrajectoryEnsemble& e, const std::filesystem::path& path,
                              int stride = 1);
void export_coeffs_text(const SpectralCoeffs& c, const std::filesystem::path& path);

// FNV-1a 64-bit checksum of a file's bytes (determinism manifests).
std::uint64_t file_checksum(const std::filesystem::path& path);

} // namespace qtraj
