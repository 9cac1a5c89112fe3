#pragma once

// Binary model file, little-endian throughout:
//   "HGMODEL" | u32 schema_version | u8 algorithm | hyperparams | standardizer
//   | label set | payload
// Doubles are stored as their IEEE-754 bit patterns, so a round trip is exact.

#include "healthguard/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hg {

inline constexpr std::string_view kModelMagic = "HGMODEL";

std::vector<std::uint8_t> serialize_model(const Model& model);
/// Throws FormatError (with byte offset) on bad magic, version mismatch,
/// truncation, or inconsistent payload. Never returns a partial model.
Model deserialize_model(const std::vector<std::uint8_t>& bytes);

/// Throws IoError when the file cannot be written.
void save_model(const Model& model, const std::string& path);
/// Throws IoError when the file cannot be read, FormatError when malformed.
Model load_model(const std::string& path);

}  // namespace hg
