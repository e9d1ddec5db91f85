#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace icd {

/// Split on runs of spaces/tabs. No empty fields.
std::vector<std::string_view> split_ws(std::string_view line);

/// Split on a single delimiter; empty fields preserved.
std::vector<std::string> split_char(std::string_view line, char delim);

/// Locale-independent double parse. Throws std::runtime_error on failure.
double parse_double(std::string_view s);

/// Locale-independent integer parse.
long long parse_int(std::string_view s);

/// Render with 17 significant digits so parse(format(x)) == x for all doubles.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// FNV-1a 64-bit over bytes. Non-cryptographic; used for stage-cache keys and
/// manifest content hashes.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t v);

}  // namespace icd
