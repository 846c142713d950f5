#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reicqed::cli {

using Cell = std::variant<double, std::string, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

// Numbers as 12 significant digits in scientific notation, booleans as
// true/false, LF line endings, no trailing comma.
std::string format_csv_number(double v);
// Quoted when the text holds a comma, quote or line break.
std::string csv_field(const std::string& text);
std::string to_csv(const Table& t);

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column; throws ValidationError when absent.
  std::size_t column(const std::string& name, const std::string& source) const;
};
CsvData read_csv(const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

void write_file(const std::string& path, std::string_view bytes);

}  // namespace reicqed::cli
