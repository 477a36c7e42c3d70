#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace banditlab {

// 17 significant digits: enough to round-trip any double, so reruns with the
// same seed reproduce output files byte for byte.
std::string format_double(double v);
std::string format_int(std::int64_t v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_string() const;
};

// Writes content to path.tmp, then renames over path. Readers never observe a
// partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

CsvTable read_csv(const std::filesystem::path& path);

// Column lookup; throws when the column is missing.
std::size_t csv_column(const CsvTable& table, const std::string& name);

}  // namespace banditlab
