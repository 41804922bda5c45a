#pragma once

#include <filesystem>

#include "dare/nn/model.hpp"

namespace dare::nn {

// Checkpoint layout (version 1):
//   bytes 0-5   magic "DAREv1"
//   bytes 6-9   u32 little-endian: length of the config JSON
//   ...         config JSON (architecture, heads, seed)
//   ...         every parameter tensor in declaration order, float32
//               little-endian, no per-tensor header
// The file ends exactly after the last tensor; anything shorter raises
// TruncatedError, trailing bytes raise CheckpointError. A wrong magic raises
// BadMagicError, or VersionMismatchError when only the version part differs.
// save followed by load reproduces the model bit for bit.
void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace dare::nn
