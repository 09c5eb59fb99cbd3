#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace roadtones {

std::string to_lower_ascii(std::string_view text);
std::string_view trim(std::string_view text) noexcept;
bool iequals(std::string_view a, std::string_view b) noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;
std::string to_hex(std::uint64_t value);

/// Whole-file read/write; both throw Error(kIoError).
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Non-empty lines after trimming.
std::vector<std::string> read_nonempty_lines(const std::filesystem::path& path);

/// Lowercase ASCII alphanumeric runs (apostrophes inside words are dropped).
std::vector<std::string> word_tokens(std::string_view text);

/// Unbiased draw from [0, bound) by rejection. The std distributions are
/// implementation-defined, so seeded outputs would differ across toolchains.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

}  // namespace roadtones
