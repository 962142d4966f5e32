#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace recist_kit::rng {

// All randomness in the toolkit flows through std::mt19937_64, whose output
// sequence is fixed by the standard, plus the portable helpers below.
// std::*_distribution is never used (its output is implementation-defined).
using Engine = std::mt19937_64;

// FNV-1a over a byte sequence.
std::uint64_t fnv1a64(const void* data, std::size_t len);

// Per-image seed: FNV-1a over the 8 little-endian bytes of `seed` followed
// by the raw bytes of `image_id`. See docs/FORMATS.md.
std::uint64_t derive_image_seed(std::uint64_t seed, std::string_view image_id);

// Uniform in [0, 1) with 53 random bits.
double next_unit(Engine& eng);

// Uniform integer in [0, n), unbiased via rejection. n must be > 0.
std::uint64_t next_below(Engine& eng, std::uint64_t n);

// Partial Fisher-Yates draw of `m` distinct elements from `population`,
// returned in draw order. m must be <= population.size().
std::vector<std::size_t> sample_without_replacement(Engine& eng,
                                                    const std::vector<std::size_t>& population,
                                                    std::size_t m);

// Box-Muller normal deviate.
double next_normal(Engine& eng, double mean, double stddev);

// Normal deviate rejection-truncated to [lo, hi]; clamps after 256 attempts.
double next_truncated_normal(Engine& eng, double mean, double stddev, double lo, double hi);

// Knuth's Poisson sampler (rates here are small).
std::uint64_t next_poisson(Engine& eng, double rate);

}  // namespace recist_kit::rng
