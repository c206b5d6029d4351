#pragma once

#include <string>
#include <vector>

namespace foodland {

// All numeric output goes through these formatters: snprintf with the C locale,
// so emitted files are byte-stable across environments.

// 9 significant digits, the precision used by every emitted CSV.
std::string format_double(double v);

// 17 significant digits; round-trips doubles exactly (used by config files).
std::string format_double_exact(double v);

std::string join_csv(const std::vector<std::string>& fields);

struct CsvDoc {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // all rows have header size
};

// Reads a comma-separated file with a mandatory header row. Field counts are
// enforced per row; fields are whitespace-trimmed. Quoting is not supported
// (no emitted schema needs it). Throws IoError if unreadable, ConfigError on
// structural problems (with 1-based line numbers).
CsvDoc read_csv(const std::string& path);

// Strict numeric field parsing; context appears in error messages.
double parse_double_field(const std::string& s, const std::string& context);
long long parse_int_field(const std::string& s, const std::string& context);

std::string read_text_file(const std::string& path);   // throws IoError
void write_text_file(const std::string& path, const std::string& content);

}  // namespace foodland
