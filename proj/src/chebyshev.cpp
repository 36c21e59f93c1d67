#include "chebyshev.hpp"

#include <cmath>
#include <numbers>

namespace minlen::detail {

namespace {

// cos(pi k / (2n)) for k in [0, 4n); T_m at node j is table[m (2j + 1) mod 4n].
std::vector<double> cosine_table(std::size_t n) {
  std::vector<double> table(4 * n);
  for (std::size_t k = 0; k < table.size(); ++k) {
    table[k] = std::cos(std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n)));
  }
  return table;
}

} // namespace

// Internally the nodes are y_j = cos((2j + 1) pi / (2n)), descending; the
// public ordering is x_k = y_{n-1-k}.

std::vector<double> chebyshev_nodes(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = n - 1 - k;
    x[k] = std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * n));
  }
  return x;
}

std::vector<double> fejer_weights(std::size_t n) {
  const auto table = cosine_table(n);
  const std::size_t period = 4 * n;
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = n - 1 - k;
    double sum = 0.0;
    for (std::size_t m = 1; 2 * m < n; ++m) {
      const double denom = 4.0 * m * m - 1.0;
      sum += table[(2 * m * (2 * j + 1)) % period] / denom;
    }
    w[k] = 2.0 / n * (1.0 - 2.0 * sum);
  }
  return w;
}

std::vector<std::complex<double>> chebyshev_running_integral(std::span<const std::complex<double>> samples) {
  const std::size_t n = samples.size();
  const auto table = cosine_table(n);
  const std::size_t period = 4 * n;

  // Interpolant h = a_0 / 2 + sum_m a_m T_m.
  std::vector<std::complex<double>> a(n + 2, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += samples[n - 1 - j] * table[(m * (2 * j + 1)) % period];
    }
    a[m] = sum * (2.0 / n);
  }

  // Antiderivative coefficients; b_0 fixes F(-1) = 0.
  std::vector<std::complex<double>> b(n + 1, 0.0);
  std::complex<double> at_minus_one = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    b[m] = (a[m - 1] - a[m + 1]) / (2.0 * m);
    at_minus_one += (m % 2 == 0 ? 1.0 : -1.0) * b[m];
  }
  b[0] = -at_minus_one;

  std::vector<std::complex<double>> out(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = n - 1 - k;
    std::complex<double> sum = b[0];
    for (std::size_t m = 1; m <= n; ++m) sum += b[m] * table[(m * (2 * j + 1)) % period];
    out[k] = sum;
  }
  std::complex<double> total = b[0];
  for (std::size_t m = 1; m <= n; ++m) total += b[m];
  out[n] = total;
  return out;
}

} // namespace minlen::detail
