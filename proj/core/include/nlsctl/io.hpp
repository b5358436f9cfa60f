#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlsctl/control_path.hpp"
#include "nlsctl/noise.hpp"
#include "nlsctl/trajectory.hpp"

namespace nlsctl::io {

/// Optional first line "# config_hash=<hex>,base_seed=<n>" for every CSV.
struct Provenance {
  std::string config_hash;
  std::uint64_t base_seed = 0;
};

/// t, mass, lp2, lp4, lpinf per stored node.
void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj,
                          const Provenance* provenance = nullptr);

/// t, u_1..u_m.
void write_control_csv(const std::filesystem::path& file, const ControlPath& u,
                       const Provenance* provenance = nullptr);
/// Reads a control CSV written by write_control_csv (comment lines skipped).
ControlPath read_control_csv(const std::filesystem::path& file);

/// t, beta_1..beta_N.
void write_path_csv(const std::filesystem::path& file, const WienerPath& path,
                    const Provenance* provenance = nullptr);

/// Binary field dump, little-endian:
///   int32 d, int32 n, float64 L, int64 M, int64 stride, float64 T,
/// followed by one array of n^d complex128 (re, im) per stored node, in the
/// order given by Trajectory::stored_nodes(M, stride).
void write_trajectory_binary(const std::filesystem::path& file, const Trajectory& traj);
Trajectory read_trajectory_binary(const std::filesystem::path& file);

}  // namespace nlsctl::io
