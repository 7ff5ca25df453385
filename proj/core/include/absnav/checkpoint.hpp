#pragma once

#include <filesystem>
#include <iosfwd>

#include "absnav/mlp.hpp"

namespace absnav {

/// Text checkpoint, version 1:
///
///   ABSCKPT v1
///   <layer dims, space separated>
///   <weights of layer 0, row-major, space separated>
///   <biases of layer 0>
///   ...
///
/// Values are printed with 17 significant digits so a round trip is bit-exact.
inline constexpr int kCheckpointVersion = 1;

void write_checkpoint(const MlpParams& params, std::ostream& out);
[[nodiscard]] MlpParams read_checkpoint(std::istream& in);

/// Throws IoFailure when the file cannot be written.
void save_checkpoint(const MlpParams& params, const std::filesystem::path& path);

/// Throws IoFailure, FormatVersionMismatch or CorruptCheckpoint.
[[nodiscard]] MlpParams load_checkpoint(const std::filesystem::path& path);

}  // namespace absnav
