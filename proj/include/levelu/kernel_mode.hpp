#pragma once

#include <string_view>

namespace levelu {

/// Resource-allocation policy for one level of the numeric factorization.
///  - SmallBlock: one column per block, a few warps per block, many columns at once.
///  - LargeBlock: one column per block, full 32-warp blocks.
///  - Stream: one block per subcolumn, columns spread over a fixed set of streams.
enum class KernelMode { SmallBlock, LargeBlock, Stream };

constexpr std::string_view to_string(KernelMode m)
{
    switch (m) {
    case KernelMode::SmallBlock: return "SmallBlock";
    case KernelMode::LargeBlock: return "LargeBlock";
    case KernelMode::Stream: return "Stream";
    }
    return "?";
}

}  // namespace levelu
