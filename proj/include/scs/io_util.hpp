#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace scs {

/// Shortest round-trip decimal representation of a double (std::to_chars).
/// Deterministic across runs and platforms; used for every number written to
/// CSV so that identical inputs yield byte-identical files.
std::string format_double(double value);

/// Read a whole file into a string. Throws std::runtime_error naming the
/// path when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Write a string to a file, creating parent directories as needed.
/// Throws std::runtime_error naming the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Split one CSV line on commas (no quoting; fields must not contain commas).
/// A trailing '\r' on the line is stripped first.
std::vector<std::string> split_csv_line(const std::string& line);

/// Parse a double from a full string via std::from_chars. Throws
/// std::runtime_error with `context` in the message when the string is not a
/// complete finite number.
double parse_double(const std::string& text, const std::string& context);

} // namespace scs
