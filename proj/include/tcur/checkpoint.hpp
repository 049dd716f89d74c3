#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "tcur/adapter.hpp"

namespace tcur {

// Binary checkpoint layout (all integers little-endian):
//
//   offset  size   field
//   0       4      magic "TCUR"
//   4       4      u32 format version (kCheckpointVersion)
//   8       4      u32 payload kind (PayloadKind)
//   12      4      u32 data layout (1 = slice-major, row-major within a slice)
//   16      4      u32 stack group (StackGroup; slice ordering of stacked weights)
//   20      4      u32 rank (0 for raw tensors)
//   24      4      u32 tensor count T
//   28      4      u32 index-set count S
//   32      24*T   per tensor: u64 n1, u64 n2, u64 n3
//   ...            per index set: u64 length, then length x u64 indices
//   ...            tensor values as IEEE-754 binary64, little-endian, in tensor order
//   end-4   4      u32 CRC-32 (IEEE 802.3) of every preceding byte
//
// Tensor order by kind:  raw_tensor: W;  tcur_factors: C, core, R with index
// sets I, J;  adapter: base, C, R, U.

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::uint32_t kSliceMajorLayout = 1;

enum class PayloadKind : std::uint32_t { RawTensor = 0, TcurFactors = 1, Adapter = 2 };

std::string_view to_string(PayloadKind k);

struct Checkpoint {
    StackGroup group = StackGroup::None;
    std::variant<Tensor3, TcurFactors, Adapter> payload;

    PayloadKind kind() const { return PayloadKind(payload.index()); }
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);

/// Validates magic, version, checksum and dims before building any value.
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::filesystem::path& path);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);

}  // namespace tcur
