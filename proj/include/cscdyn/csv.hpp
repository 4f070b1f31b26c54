#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace cscdyn {

/// 17 significant digits, '.' separator,
/// locale independent.
[[nodiscard]] std::string format_number(double x);

/// Comma-separated writer with a mandatory header row. Throws IoError when
/// the file cannot be opened or written.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  void close();
  ~CsvWriter();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace cscdyn
