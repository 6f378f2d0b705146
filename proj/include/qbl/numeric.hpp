#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qbl {

// Pairwise summation over an index space. The reduction tree depends only on
// the index range, so results are identical regardless of threading or call
// site, and rounding error grows as O(log n).
template <typename T, typename Term>
T pairwise_reduce(std::size_t begin, std::size_t end, Term&& term) {
  const std::size_t count = end - begin;
  if (count <= 64) {
    T sum{};
    for (std::size_t i = begin; i < end; ++i) sum += term(i);
    return sum;
  }
  const std::size_t mid = begin + count / 2;
  return pairwise_reduce<T>(begin, mid, term) + pairwise_reduce<T>(mid, end, term);
}

template <typename Term>
double pairwise_sum(std::size_t count, Term&& term) {
  return pairwise_reduce<double>(0, count, term);
}

inline double pairwise_sum(std::span<const double> values) {
  return pairwise_reduce<double>(0, values.size(), [&](std::size_t i) { return values[i]; });
}

inline std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) {
  return pairwise_reduce<std::complex<double>>(0, values.size(),
                                               [&](std::size_t i) { return values[i]; });
}

}  // namespace qbl
