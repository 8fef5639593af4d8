#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

#include <boost/random/normal_distribution.hpp>

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

namespace bcp::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of
/// (counter, key); validated against the Random123 known-answer vectors.
inline Counter philox4x32(Counter ctr, Key key) noexcept {
    constexpr std::uint32_t kMulA = 0xD2511F53;
    constexpr std::uint32_t kMulB = 0xCD9E8D57;
    constexpr std::uint32_t kWeylA = 0x9E3779B9;
    constexpr std::uint32_t kWeylB = 0xBB67AE85;
    std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c2;
        const auto n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
        const auto n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
        c1 = static_cast<std::uint32_t>(p1);
        c3 = static_cast<std::uint32_t>(p0);
        c0 = n0;
        c2 = n2;
        k0 += kWeylA;
        k1 += kWeylB;
    }
    return {c0, c1, c2, c3};
}

/// Identity string recorded in every report.
inline constexpr std::string_view kGeneratorId =
    "philox4x32-10[key=seed; ctr=(block,stream_lo,stream_hi,lane)] + boost ziggurat normal";

/// Independent sub-streams of one path. Lanes never overlap, so adding a new
/// consumer of randomness cannot shift the numbers seen by another.
enum class Lane : std::uint32_t {
    Normals = 0,
    Thinning = 1,
    Refinement = 2,  // piecewise-linear knot refinement, one lane per level
    Gamma = 1u << 16,  // certification draws, one lane per time grid point
};

inline std::uint32_t lane_id(Lane lane, std::uint32_t offset = 0) noexcept {
    return static_cast<std::uint32_t>(lane) + offset;
}

/// Sequential 32-bit word stream keyed by (seed, stream, lane). Satisfies
/// UniformRandomBitGenerator so it can drive boost distributions.
class CounterStream {
public:
    using result_type = std::uint32_t;

    CounterStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t lane) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (pos_ == kWords) refill();
        return buf_[pos_++];
    }

private:
    static constexpr unsigned kBlocks = 16;

#if defined(__SSE2__)
    // Full 32x32 -> 64 products of four lanes, split into high and low words.
    static void mulhilo(__m128i a, __m128i m, __m128i& hi, __m128i& lo) noexcept {
        const __m128i even = _mm_shuffle_epi32(_mm_mul_epu32(a, m), _MM_SHUFFLE(3, 1, 2, 0));
        const __m128i odd = _mm_shuffle_epi32(_mm_mul_epu32(_mm_srli_epi64(a, 32), m), _MM_SHUFFLE(3, 1, 2, 0));
        lo = _mm_unpacklo_epi32(even, odd);
        hi = _mm_unpackhi_epi32(even, odd);
    }
#endif
    static constexpr unsigned kWords = 4 * kBlocks;

    // Same words as kBlocks successive philox4x32 calls, with the blocks run
    // side by side so the rounds vectorize.
    void refill() noexcept {
#if defined(__SSE2__)
        constexpr unsigned kVec = kBlocks / 4;
        __m128i c0[kVec], c1[kVec], c2[kVec], c3[kVec];
        for (unsigned v = 0; v < kVec; ++v) {
            const auto base = static_cast<int>(ctr_[0] + 4 * v);
            c0[v] = _mm_add_epi32(_mm_set1_epi32(base), _mm_setr_epi32(0, 1, 2, 3));
            c1[v] = _mm_set1_epi32(static_cast<int>(ctr_[1]));
            c2[v] = _mm_set1_epi32(static_cast<int>(ctr_[2]));
            c3[v] = _mm_set1_epi32(static_cast<int>(ctr_[3]));
        }
        const __m128i mul_a = _mm_set1_epi32(static_cast<int>(0xD2511F53u));
        const __m128i mul_b = _mm_set1_epi32(static_cast<int>(0xCD9E8D57u));
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int r = 0; r < 10; ++r) {
            const __m128i kv0 = _mm_set1_epi32(static_cast<int>(k0));
            const __m128i kv1 = _mm_set1_epi32(static_cast<int>(k1));
            for (unsigned v = 0; v < kVec; ++v) {
                __m128i hi0, lo0, hi1, lo1;
                mulhilo(c0[v], mul_a, hi0, lo0);
                mulhilo(c2[v], mul_b, hi1, lo1);
                c0[v] = _mm_xor_si128(_mm_xor_si128(hi1, c1[v]), kv0);
                c2[v] = _mm_xor_si128(_mm_xor_si128(hi0, c3[v]), kv1);
                c1[v] = lo1;
                c3[v] = lo0;
            }
            k0 += 0x9E3779B9;
            k1 += 0xBB67AE85;
        }
        for (unsigned v = 0; v < kVec; ++v) {
            const __m128i t0 = _mm_unpacklo_epi32(c0[v], c1[v]);
            const __m128i t1 = _mm_unpacklo_epi32(c2[v], c3[v]);
            const __m128i t2 = _mm_unpackhi_epi32(c0[v], c1[v]);
            const __m128i t3 = _mm_unpackhi_epi32(c2[v], c3[v]);
            auto* out = reinterpret_cast<__m128i*>(buf_.data() + 16 * v);
            _mm_storeu_si128(out, _mm_unpacklo_epi64(t0, t1));
            _mm_storeu_si128(out + 1, _mm_unpackhi_epi64(t0, t1));
            _mm_storeu_si128(out + 2, _mm_unpacklo_epi64(t2, t3));
            _mm_storeu_si128(out + 3, _mm_unpackhi_epi64(t2, t3));
        }
#else
        for (unsigned b = 0; b < kBlocks; ++b) {
            const Counter out = philox4x32({ctr_[0] + b, ctr_[1], ctr_[2], ctr_[3]}, key_);
            std::copy(out.begin(), out.end(), buf_.begin() + 4 * b);
        }
#endif
        ctr_[0] += kBlocks;
        pos_ = 0;
    }

    Key key_;
    Counter ctr_;
    std::array<std::uint32_t, kWords> buf_{};
    unsigned pos_ = kWords;
};

/// Uniform on the open interval (0,1); 52 random bits on a half-offset grid.
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Randomness for a single simulated path: a sequential normal stream plus a
/// random-access uniform per grid step. Everything depends only on
/// (seed, path index), never on which thread runs the path.
class PathRandom {
public:
    PathRandom(std::uint64_t seed, std::uint64_t path, std::uint32_t normal_lane = 0) noexcept
        : seed_(seed), path_(path), normals_(seed, path, normal_lane) {}

    double normal() { return normal_dist_(normals_); }

    /// Uniform attached to grid step `step`; repeated calls give the same value.
    double step_uniform(std::uint64_t step) const noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t path_;
    CounterStream normals_;
    boost::random::normal_distribution<double> normal_dist_;
};

}  // namespace bcp::rng
