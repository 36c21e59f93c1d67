#include "format.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "minlen/cli.hpp"

namespace minlen::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

namespace detail {

std::string cell(const std::optional<double>& value) { return value ? format_double(*value) : std::string(); }

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

} // namespace detail

} // namespace minlen::cli
