#pragma once

#include <optional>
#include <string>

#include "robustnet/neural.hpp"

namespace robustnet {

// Binary model file. Layout:
//   magic "RNDQ", u32 version (currently 1), then tensor records to EOF.
// Each record: u32 name length, UTF-8 name, u32 rank, rank u64 dims, then
// row-major f64 payload. All integers and doubles little-endian.
// Scalars (rank 0) carry the config and optimizer counters; "theta1"
// through "theta6" carry the parameters; "adam/..." tensors appear only
// when optimizer state is saved.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  NetConfig config;
  NetworkParams params;
  std::optional<AdamState> adam;
};

void save_checkpoint(const std::string& path, const NetworkParams& params, const NetConfig& cfg,
                     const AdamState* adam = nullptr);

// Loads and validates; throws on bad magic, unsupported version, missing or
// unknown tensors, shape mismatches, or truncation.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace robustnet
