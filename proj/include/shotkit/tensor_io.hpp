#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "shotkit/types.hpp"

namespace shotkit {

// Binary tensor container, little-endian regardless of host:
//   bytes 0-3   magic "STCF"
//   byte  4     version (0x01)
//   byte  5     dtype   (0x00 = float32)
//   bytes 6-7   ndim, uint16
//   then        ndim x uint64 dims
//   then        row-major float32 payload
//
// Readers reject bad magic, unknown version/dtype, short payloads, and
// trailing bytes, each with a distinct error code.
FeatureTensor read_tensor(std::istream& in);
FeatureTensor read_tensor(const std::filesystem::path& path);

void write_tensor(const FeatureTensor& tensor, std::ostream& out);
void write_tensor(const FeatureTensor& tensor, const std::filesystem::path& path);

}  // namespace shotkit
