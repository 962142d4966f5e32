#include "recist_kit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace recist_kit::rng {

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t derive_image_seed(std::uint64_t seed, std::string_view image_id) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((seed >> (8 * i)) & 0xff);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : buf) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  for (char c : image_id) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

double next_unit(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

std::uint64_t next_below(Engine& eng, std::uint64_t n) {
  const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
  std::uint64_t x;
  do {
    x = eng();
  } while (x > limit);
  return x % n;
}

std::vector<std::size_t> sample_without_replacement(Engine& eng,
                                                    const std::vector<std::size_t>& population,
                                                    std::size_t m) {
  std::vector<std::size_t> pool = population;
  std::vector<std::size_t> out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t pick = static_cast<std::size_t>(next_below(eng, pool.size() - k));
    out.push_back(pool[pick]);
    std::swap(pool[pick], pool[pool.size() - 1 - k]);
  }
  return out;
}

double next_normal(Engine& eng, double mean, double stddev) {
  double u1;
  do {
    u1 = next_unit(eng);
  } while (u1 <= 0.0);
  const double u2 = next_unit(eng);
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  return mean + stddev * z;
}

double next_truncated_normal(Engine& eng, double mean, double stddev, double lo, double hi) {
  if (stddev <= 0.0) return std::min(hi, std::max(lo, mean));
  for (int attempt = 0; attempt < 256; ++attempt) {
    const double x = next_normal(eng, mean, stddev);
    if (x >= lo && x <= hi) return x;
  }
  return std::min(hi, std::max(lo, mean));
}

std::uint64_t next_poisson(Engine& eng, double rate) {
  if (rate <= 0.0) return 0;
  const double l = std::exp(-rate);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= next_unit(eng);
  } while (p > l);
  return k - 1;
}

}  // namespace recist_kit::rng
