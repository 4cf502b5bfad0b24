#pragma once

#include <string>
#include <vector>

// Small file / formatting helpers. All floats are printed with shortest
// round-trip formatting so CSV re-reads are bit-exact.

namespace dmu {

std::string format_double(double v);
double parse_double(const std::string& s);

// Writes via a temp file + rename so readers never observe partial content.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

std::string iso8601_utc_now();

// Splits one CSV line on commas (no quoting; none of our fields need it).
std::vector<std::string> split_csv_line(const std::string& line);

// Ensures the directory exists (mkdir -p semantics).
void ensure_dir(const std::string& path);

}  // namespace dmu
