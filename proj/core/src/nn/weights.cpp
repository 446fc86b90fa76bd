#include "caelo/nn/weights.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "caelo/error.hpp"

namespace caelo::nn {

namespace {

static_assert(std::endian::native == std::endian::little, "weight files are little-endian");

constexpr char kMagic[8] = {'c', 'a', 'e', 'l', 'o', '-', 'w', '1'};

}  // namespace

std::string serialize_weights(const Network& net) {
  std::string out(kMagic, sizeof(kMagic));
  const std::uint64_t header[2] = {net.fingerprint(), net.param_count()};
  out.append(reinterpret_cast<const char*>(header), sizeof(header));
  const auto p = net.params();
  out.append(reinterpret_cast<const char*>(p.data()), p.size() * sizeof(float));
  return out;
}

void deserialize_weights(Network& net, std::string_view bytes) {
  if (bytes.size() < sizeof(kMagic) + 16) throw ParseError("weight file truncated (header)");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) throw ParseError("not a caelo-w1 weight file");
  std::uint64_t header[2];
  std::memcpy(header, bytes.data() + sizeof(kMagic), sizeof(header));
  if (header[0] != net.fingerprint()) {
    throw FingerprintError("weight file was written for a different architecture");
  }
  if (header[1] != net.param_count()) throw FingerprintError("parameter count mismatch");
  const std::size_t body = header[1] * sizeof(float);
  if (bytes.size() != sizeof(kMagic) + sizeof(header) + body) {
    throw ParseError("weight file truncated or padded: expected " + std::to_string(body) + " parameter bytes");
  }
  std::memcpy(net.params().data(), bytes.data() + sizeof(kMagic) + sizeof(header), body);
}

void save_weights(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const std::string bytes = serialize_weights(net);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void load_weights(Network& net, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  deserialize_weights(net, buf.str());
}

}  // namespace caelo::nn
