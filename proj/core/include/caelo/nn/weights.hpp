#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "caelo/nn/network.hpp"

namespace caelo::nn {

/// Weight file layout (little-endian):
///   8 bytes  magic "caelo-w1"
///   u64      architecture fingerprint
///   u64      parameter count
///   f32[n]   parameters in layer order
std::string serialize_weights(const Network& net);
/// Throws FingerprintError on an architecture mismatch, ParseError on a
/// malformed or truncated buffer.
void deserialize_weights(Network& net, std::string_view bytes);

void save_weights(const Network& net, const std::filesystem::path& path);
void load_weights(Network& net, const std::filesystem::path& path);

}  // namespace caelo::nn
