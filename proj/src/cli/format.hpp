#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace minlen::cli::detail {

/// Empty string for a missing value, format_double otherwise.
std::string cell(const std::optional<double>& value);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

} // namespace minlen::cli::detail
