#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace minlen::detail {

/// Chebyshev points of the first kind on (-1, 1), in ascending order.
std::vector<double> chebyshev_nodes(std::size_t n);

/// Fejer first-rule weights matching chebyshev_nodes(n).
std::vector<double> fejer_weights(std::size_t n);

/// Running integral int_{-1}^{x_k} h(x) dx at every node, from the Chebyshev
/// interpolant of the samples h(x_k); the last entry of the result is the
/// integral over the whole interval.
std::vector<std::complex<double>> chebyshev_running_integral(std::span<const std::complex<double>> samples);

} // namespace minlen::detail
