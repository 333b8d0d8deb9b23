#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qasfg::quadrature {

// Composite Simpson rule on a uniform grid with an odd number of nodes.
template <typename T>
T simpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("simpson: need an odd number of nodes >= 3");
  T odd{}, even{};
  for (std::size_t i = 1; i + 1 < n; i += 2) odd += f[i];
  for (std::size_t i = 2; i + 1 < n; i += 2) even += f[i];
  return (h / 3.0) * (f[0] + f[n - 1] + 4.0 * odd + 2.0 * even);
}

// Running integral F(z_i) = ∫_{z_0}^{z_i} f with F(z_0) = 0.
// Each pair of intervals uses the 3-point rules (5, 8, -1)/12 and
// (-1, 8, 5)/12 over the same nodes, so F at even nodes equals the composite
// Simpson value.
template <typename T>
std::vector<T> cumulative_simpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 3)
    throw std::invalid_argument("cumulative_simpson: need at least 3 nodes");
  std::vector<T> out(n);
  out[0] = T{};
  const double w = h / 12.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    out[i + 1] = out[i] + w * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
    out[i + 2] = out[i + 1] + w * (-f[i] + 8.0 * f[i + 1] + 5.0 * f[i + 2]);
  }
  if (i + 1 < n) // trailing interval on an even-sized grid
    out[i + 1] = out[i] + w * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
  return out;
}

} // namespace qasfg::quadrature
