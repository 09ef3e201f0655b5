#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace seqmine::app {

// %.10g everywhere a float lands in a CSV, per the output contract.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws InputError if missing
};

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace seqmine::app
