#ifndef EQUIAFFINE_SAMPLING_HPP
#define EQUIAFFINE_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "equiaffine/geometry.hpp"

namespace equiaffine {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

namespace detail {

inline constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

inline double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f /= base;
  }
  return result;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform in [0, 1) from the top 53 bits.
inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace detail

/// `count` points of a Halton sequence with a seeded Cranley-Patterson
/// shift, mapped into the chart box. Identical inputs give identical points
/// on every platform.
inline std::vector<Point> sample_points(const Chart& chart, int count, std::uint64_t seed = kDefaultSeed) {
  const int n = chart.dim();
  std::uint64_t state = seed;
  std::vector<double> shift(static_cast<std::size_t>(n));
  for (auto& s : shift) s = detail::unit_double(detail::splitmix64(state));

  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Point p(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      double u = detail::radical_inverse(static_cast<std::uint64_t>(i) + 1, detail::kPrimes[k]) + shift[k];
      u -= std::floor(u);
      p[k] = chart.lo()[k] + u * (chart.hi()[k] - chart.lo()[k]);
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace equiaffine

#endif  // EQUIAFFINE_SAMPLING_HPP
