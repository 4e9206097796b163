#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace sigmaevo {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

using CsvCell = std::variant<double, long long, std::string>;

/// Fixed-column CSV builder: the header is set once and every row must match it.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<CsvCell>& cells);
  void add_row(std::initializer_list<double> values);
  std::size_t rows() const noexcept { return rows_; }
  const std::string& str() const noexcept { return text_; }
  void write(const std::filesystem::path& path) const;

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Writes text to path, creating parent directories; throws on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sigmaevo
