#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace funclass {

// Numeric cell with 9 significant digits; the same value always prints the
// same bytes, which the reproducibility checks compare across runs.
std::string fmt_sig9(double v);
std::string fmt_int(long long v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const CsvTable& table);
void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace funclass
