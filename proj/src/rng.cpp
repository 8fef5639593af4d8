#include "bcp/rng.hpp"

namespace bcp::rng {

namespace {

Key make_key(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

}  // namespace

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t lane) noexcept
    : key_(make_key(seed)),
      ctr_{0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), lane} {}

double PathRandom::step_uniform(std::uint64_t step) const noexcept {
    // Two uniforms per block; the block index occupies the first counter word.
    const Counter ctr{static_cast<std::uint32_t>(step >> 1), static_cast<std::uint32_t>(path_),
                      static_cast<std::uint32_t>(path_ >> 32), lane_id(Lane::Thinning)};
    const Counter out = philox4x32(ctr, make_key(seed_));
    return (step & 1u) ? to_open_unit(out[2], out[3]) : to_open_unit(out[0], out[1]);
}

}  // namespace bcp::rng
