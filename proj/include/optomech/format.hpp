#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace optomech {

// Shortest decimal that round-trips to the same double; "nan", "inf", "-inf"
// for non-finite values.
std::string format_double(double x);

// One CSV line (LF terminated) of already-formatted fields.
std::string csv_line(const std::vector<std::string>& fields);
std::string csv_line(const std::vector<double>& values);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace optomech
