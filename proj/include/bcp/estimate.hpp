#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

namespace bcp {

/// A seeded Monte-Carlo probability estimate.
struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t n_steps = 0;
    bool bridge_correction = false;
    std::string bias_note;
};

/// Bernoulli estimate from a success count.
inline MCEstimate bernoulli_estimate(std::size_t successes, std::size_t n) {
    MCEstimate e;
    e.n = n;
    if (n == 0) return e;
    e.mean = static_cast<double>(successes) / static_cast<double>(n);
    e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(n));
    return e;
}

}  // namespace bcp
