#pragma once

#include <cstdint>
#include <string_view>

namespace potcap {

/// Independent per-operation stream from a master seed: FNV-1a over the
/// operation name, mixed with the master seed and index through splitmix64.
std::uint64_t derive_seed(std::uint64_t master, std::string_view op, std::uint64_t index = 0);

}  // namespace potcap
