#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forgery {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

/// Strict numeric parses; std::nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::vector<std::string_view> split_char(std::string_view s, char sep);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     std::string_view content);

/// Write to `path.tmp` then rename; readers never observe a partial file.
void write_text_file_atomic(const std::filesystem::path& path,
                            std::string_view content);

} // namespace forgery
