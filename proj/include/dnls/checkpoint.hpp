#pragma once

#include <filesystem>

#include "dnls/dynamics.hpp"

namespace dnls {

/// Binary trajectory file, all fields little-endian:
///   8 bytes  magic "DNLSCKPT"
///   u32      format version (1)
///   u32      reserved (0)
///   u64      n_points
///   f64      box_length
///   f64      center
///   u64      snapshot count
///   per snapshot: f64 t, then n_points (re, im) f64 pairs
/// Conserved quantities are not stored; norms are recomputed on load.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void checkpoint_save(const Trajectory& traj, const std::filesystem::path& path);

/// Builds the grid from the header. CheckpointError on a bad magic, an
/// unknown version or a truncated/oversized file.
Trajectory checkpoint_load(const std::filesystem::path& path);

/// As above, and additionally requires the stored grid to match `expected`
/// (CheckpointError naming both layouts otherwise).
Trajectory checkpoint_load(const std::filesystem::path& path, const Grid& expected);

}  // namespace dnls
