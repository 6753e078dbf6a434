#include "shotkit/tensor_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <limits>

namespace shotkit {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'T', 'C', 'F'};
constexpr unsigned char kVersion = 0x01;
constexpr unsigned char kDtypeFloat32 = 0x00;

// All multi-byte fields are little-endian on disk, independent of host.
void put_u16(std::ostream& out, std::uint16_t v) {
    const unsigned char bytes[2] = {static_cast<unsigned char>(v & 0xff),
                                    static_cast<unsigned char>((v >> 8) & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes), 2);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

void put_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    unsigned char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

bool get_bytes(std::istream& in, unsigned char* dst, std::size_t n) {
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount()) == n;
}

std::uint16_t u16_from(const unsigned char* b) {
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint64_t u64_from(const unsigned char* b) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

float f32_from(const unsigned char* b) {
    std::uint32_t bits = 0;
    for (int i = 3; i >= 0; --i) bits = (bits << 8) | b[i];
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

}  // namespace

FeatureTensor read_tensor(std::istream& in) {
    unsigned char header[6];
    if (!get_bytes(in, header, 6)) {
        throw Error(ErrorCode::TruncatedPayload, "file shorter than the 6-byte header");
    }
    if (std::memcmp(header, kMagic.data(), 4) != 0) {
        throw Error(ErrorCode::BadMagic, "expected magic \"STCF\"");
    }
    if (header[4] != kVersion) {
        throw Error(ErrorCode::UnsupportedVersion,
                    "unsupported container version " + std::to_string(header[4]));
    }
    if (header[5] != kDtypeFloat32) {
        throw Error(ErrorCode::UnsupportedDtype,
                    "unsupported dtype tag " + std::to_string(header[5]));
    }

    unsigned char ndim_bytes[2];
    if (!get_bytes(in, ndim_bytes, 2)) {
        throw Error(ErrorCode::TruncatedPayload, "file ends inside the ndim field");
    }
    const std::uint16_t ndim = u16_from(ndim_bytes);
    if (ndim > 16) {
        throw Error(ErrorCode::ShapeMismatch,
                    "refusing tensor with " + std::to_string(ndim) + " dims (max 16)");
    }

    FeatureTensor tensor;
    tensor.shape.reserve(ndim);
    std::uint64_t numel = 1;
    for (std::uint16_t axis = 0; axis < ndim; ++axis) {
        unsigned char dim_bytes[8];
        if (!get_bytes(in, dim_bytes, 8)) {
            throw Error(ErrorCode::TruncatedPayload, "file ends inside the dims table");
        }
        const std::uint64_t d = u64_from(dim_bytes);
        if (d > 0 && numel > std::numeric_limits<std::uint64_t>::max() / d) {
            throw Error(ErrorCode::ShapeMismatch, "dims overflow the element count");
        }
        numel *= d;
        tensor.shape.push_back(static_cast<std::int64_t>(d));
    }
    if (numel > (std::uint64_t{1} << 33)) {
        throw Error(ErrorCode::ShapeMismatch,
                    "tensor payload implausibly large (" + std::to_string(numel) + " elements)");
    }

    tensor.data.resize(static_cast<std::size_t>(numel));
    // Bulk-read the payload, then fix byte order element-wise (a no-op
    // transformation on little-endian hosts but done portably).
    std::vector<unsigned char> raw(static_cast<std::size_t>(numel) * 4);
    if (!raw.empty() && !get_bytes(in, raw.data(), raw.size())) {
        throw Error(ErrorCode::TruncatedPayload,
                    "payload shorter than the " + std::to_string(numel) + " declared elements");
    }
    for (std::size_t i = 0; i < tensor.data.size(); ++i) {
        tensor.data[i] = f32_from(raw.data() + i * 4);
    }

    char extra;
    if (in.read(&extra, 1), in.gcount() == 1) {
        throw Error(ErrorCode::TrailingData, "trailing bytes after the declared payload");
    }
    return tensor;
}

FeatureTensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
    return read_tensor(in);
}

void write_tensor(const FeatureTensor& tensor, std::ostream& out) {
    require_valid_tensor(tensor);
    if (tensor.shape.size() > 16) {
        throw Error(ErrorCode::ShapeMismatch, "refusing to write tensor with more than 16 dims");
    }
    out.write(kMagic.data(), 4);
    const unsigned char tags[2] = {kVersion, kDtypeFloat32};
    out.write(reinterpret_cast<const char*>(tags), 2);
    put_u16(out, static_cast<std::uint16_t>(tensor.shape.size()));
    for (std::int64_t d : tensor.shape) put_u64(out, static_cast<std::uint64_t>(d));
    for (float v : tensor.data) put_f32(out, v);
    if (!out) throw Error(ErrorCode::IoError, "tensor write failed");
}

void write_tensor(const FeatureTensor& tensor, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    write_tensor(tensor, out);
}

}  // namespace shotkit
