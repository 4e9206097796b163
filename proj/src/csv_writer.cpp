#include "sigmaevo/csv_writer.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "sigmaevo/errors.hpp"

namespace sigmaevo {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  if (header.empty()) throw_invalid("csv: empty header");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvWriter::add_row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_) throw_invalid("csv: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    std::visit(
        [this](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) text_ += format_double(v);
          else if constexpr (std::is_same_v<T, long long>) text_ += std::to_string(v);
          else text_ += v;
        },
        cells[i]);
  }
  text_ += '\n';
  ++rows_;
}

void CsvWriter::add_row(std::initializer_list<double> values) {
  std::vector<CsvCell> cells(values.begin(), values.end());
  add_row(cells);
}

void CsvWriter::write(const std::filesystem::path& path) const { write_text_file(path, text_); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::internal, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::internal, "write failed for " + path.string());
}

}  // namespace sigmaevo
