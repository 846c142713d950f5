#pragma once

// Reader for the flat, sectioned key = value scenario format (a TOML subset):
// [section] and [[array-section]] headers, bare keys, numbers, quoted strings,
// booleans and single-line arrays. Comments start with '#'.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reicqed::cli {

using ConfigValue = std::variant<double, std::string, bool, std::vector<double>, std::vector<std::string>>;

struct ConfigEntry {
  std::string key;
  ConfigValue value;
  int line = 0;
};

struct ConfigSection {
  std::string name;  // empty for keys before the first header
  bool is_array = false;
  int line = 0;
  std::vector<ConfigEntry> entries;
};

struct ConfigDocument {
  std::string source;
  std::vector<ConfigSection> sections;
};

// Throws ValidationError naming source and line on malformed input, duplicate
// keys within a section, or a repeated [section] header.
ConfigDocument parse_config(std::string_view text, const std::string& source = "<input>");
ConfigDocument read_config(const std::string& path);

// Quantity kinds and the unit suffixes accepted for each.
enum class Dim { Number, Count, Text, Flag, TextList, Frequency, Time, Length, Volume, Power, Voltage, Dipole,
                 DisplacementPerVolt, Angle, FrequencyList, TimeList };

enum class Sign { Any, NonNegative, Positive };

struct FieldSpec {
  std::string base;
  Dim dim;
  Sign sign = Sign::Positive;
};

struct BoundValue {
  const FieldSpec* spec = nullptr;
  ConfigValue value;  // numeric values converted to SI
  int line = 0;
};

// Resolves every entry of a section against a schema, converting unit
// suffixes to SI. Unknown keys, missing or foreign suffixes, two spellings of
// one quantity and sign violations are reported with their line.
class BoundSection {
 public:
  BoundSection(const ConfigDocument& doc, const ConfigSection& section, const std::vector<FieldSpec>& schema);

  bool has(const std::string& base) const;
  std::optional<double> number(const std::string& base) const;
  std::optional<std::size_t> count(const std::string& base) const;
  std::optional<std::string> text(const std::string& base) const;
  std::optional<bool> flag(const std::string& base) const;
  std::optional<std::vector<double>> numbers(const std::string& base) const;
  std::optional<std::vector<std::string>> texts(const std::string& base) const;

  double required_number(const std::string& base) const;
  std::string required_text(const std::string& base) const;

  [[noreturn]] void fail(const std::string& base, const std::string& message) const;

 private:
  const BoundValue* find(const std::string& base) const;
  std::string where(int line) const;

  std::string source_;
  std::string section_;
  int section_line_ = 0;
  std::vector<BoundValue> values_;
};

// Canonical SI suffix written by the serializer for a dimension ("" for
// dimensionless kinds).
const char* si_suffix(Dim dim);

// Shortest round-tripping decimal form of a double.
std::string format_number(double v);
std::string quote(const std::string& s);

}  // namespace reicqed::cli
