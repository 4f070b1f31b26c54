#include "cscdyn/csv.hpp"

#include <charconv>
#include <cmath>

#include "cscdyn/errors.hpp"

namespace cscdyn {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw IoError(path_.string() + ": row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw IoError("write failed on " + path_.string());
}

void CsvWriter::close() {
  if (out_.is_open()) {
    out_.close();
    if (!out_) throw IoError("closing " + path_.string() + " failed");
  }
}

CsvWriter::~CsvWriter() {
  if (out_.is_open()) out_.close();
}

}  // namespace cscdyn
