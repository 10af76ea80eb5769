#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace affvol {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

// UniformRandomBitGenerator over one (seed, stream) pair.  The stream index occupies the
// high counter words, so streams never overlap; the low words count blocks.
class PhiloxEngine {
public:
    using result_type = std::uint32_t;

    PhiloxEngine(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    PhiloxBlock buffer_{};
    unsigned used_ = 4;
};

}  // namespace affvol
