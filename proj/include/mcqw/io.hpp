#pragma once
// Output plumbing shared by the CLI and the harness: shortest round-trip
// double formatting, atomic file writes (temp + rename), and CSV assembly.
#include <string>
#include <vector>

namespace mcqw {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

// Writes content to path via a temporary file in the same directory followed
// by std::rename, so readers never observe a partial file. Throws
// std::runtime_error on I/O failure.
void write_text_atomic(const std::string& path, const std::string& content);

// CSV with the given header line and one row per entry; '\n' line endings.
std::string csv_table(const std::string& header,
                      const std::vector<std::vector<double>>& rows);

}  // namespace mcqw
