#include "reicqed/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "reicqed/errors.hpp"

namespace reicqed::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != header.size()) throw ValidationError("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + csv_field(t.header[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* d = std::get_if<double>(&row[i])) out += format_csv_number(*d);
      else if (const auto* b = std::get_if<bool>(&row[i])) out += *b ? "true" : "false";
      else out += csv_field(std::get<std::string>(row[i]));
    }
    out += '\n';
  }
  return out;
}

std::size_t CsvData::column(const std::string& name, const std::string& source) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ValidationError(source + ": no column '" + name + "'");
}

CsvData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  CsvData d;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const char ch = s[i];
      if (quoted && ch == '"' && i + 1 < s.size() && s[i + 1] == '"') out.back() += s[++i];
      else if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) out.emplace_back();
      else out.back() += ch;
    }
    return out;
  };
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  d.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != d.header.size()) throw ValidationError(path + ": ragged row");
    d.rows.push_back(std::move(row));
  }
  return d;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace reicqed::cli
