#include "reicqed/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "reicqed/errors.hpp"

namespace reicqed::cli {

namespace {

struct Unit {
  const char* suffix;
  double factor;
};

const std::vector<Unit>& units_for(Dim d) {
  static const std::vector<Unit> none;
  static const std::vector<Unit> freq{{"hz", 1.0}, {"khz", 1e3}, {"mhz", 1e6}, {"ghz", 1e9}, {"thz", 1e12}};
  static const std::vector<Unit> time{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}};
  static const std::vector<Unit> length{{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}};
  static const std::vector<Unit> volume{{"m3", 1.0}, {"mm3", 1e-9}, {"um3", 1e-18}};
  static const std::vector<Unit> power{{"w", 1.0}, {"mw", 1e-3}, {"uw", 1e-6}, {"nw", 1e-9}, {"pw", 1e-12}};
  static const std::vector<Unit> voltage{{"v", 1.0}, {"kv", 1e3}};
  static const std::vector<Unit> dipole{{"cm", 1.0}};
  static const std::vector<Unit> per_volt{{"m_per_v", 1.0}, {"nm_per_v", 1e-9}, {"pm_per_v", 1e-12}};
  static const std::vector<Unit> angle{{"rad", 1.0}, {"deg", std::numbers::pi / 180.0}};
  switch (d) {
    case Dim::Frequency:
    case Dim::FrequencyList: return freq;
    case Dim::Time:
    case Dim::TimeList: return time;
    case Dim::Length: return length;
    case Dim::Volume: return volume;
    case Dim::Power: return power;
    case Dim::Voltage: return voltage;
    case Dim::Dipole: return dipole;
    case Dim::DisplacementPerVolt: return per_volt;
    case Dim::Angle: return angle;
    default: return none;
  }
}

const char* kind_name(Dim d) {
  switch (d) {
    case Dim::Number: return "number";
    case Dim::Count: return "positive integer";
    case Dim::Text: return "string";
    case Dim::Flag: return "boolean";
    case Dim::TextList: return "array of strings";
    case Dim::FrequencyList:
    case Dim::TimeList: return "array of numbers";
    default: return "number";
  }
}

class LineParser {
 public:
  LineParser(std::string_view s, const std::string& source, int line) : s_(s), source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError(source_ + ":" + std::to_string(line_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string bare_key() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a key");
    if (pos_ < s_.size() && s_[pos_] == '.') fail("dotted keys are not supported");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string string_literal() {
    skip_ws();
    const char q = s_[pos_++];
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated string");
      const char c = s_[pos_++];
      if (c == q) break;
      if (c == '\\' && q == '"') {
        if (pos_ >= s_.size()) fail("unterminated escape");
        const char e = s_[pos_++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  double number_literal() {
    skip_ws();
    const auto start = pos_;
    std::string digits;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-') {
        digits += c;
      } else if (c != '_') {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) fail("expected a value");
    const char* b = digits.data() + (digits[0] == '+' ? 1 : 0);
    double v = 0.0;
    const auto res = std::from_chars(b, digits.data() + digits.size(), v);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || !std::isfinite(v)) {
      fail("malformed number '" + std::string(s_.substr(start, pos_ - start)) + "'");
    }
    return v;
  }

  ConfigValue value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"' || c == '\'') return string_literal();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    if (c == '{') fail("inline tables are not supported");
    if (c == '[') {
      ++pos_;
      std::vector<double> nums;
      std::vector<std::string> strs;
      while (!peek(']')) {
        if (pos_ >= s_.size()) fail("unterminated array (arrays must fit on one line)");
        skip_ws();
        if (s_[pos_] == '"' || s_[pos_] == '\'') {
          if (!nums.empty()) fail("mixed array element types");
          strs.push_back(string_literal());
        } else {
          if (!strs.empty()) fail("mixed array element types");
          nums.push_back(number_literal());
        }
        if (!peek(',')) break;
        ++pos_;
      }
      expect(']');
      if (!strs.empty()) return strs;
      return nums;
    }
    return number_literal();
  }

 private:
  std::string_view s_;
  const std::string& source_;
  int line_;
  std::size_t pos_ = 0;
};

std::string quote_key(const std::string& k) { return "'" + k + "'"; }

}  // namespace

ConfigDocument parse_config(std::string_view text, const std::string& source) {
  ConfigDocument doc;
  doc.source = source;
  doc.sections.push_back({});
  std::map<std::string, int> plain_headers;
  std::vector<std::map<std::string, int>> seen(1);
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;
    LineParser p(line, source, line_no);
    if (p.at_end_or_comment()) {
      if (end == text.size()) break;
      continue;
    }
    if (p.peek('[')) {
      p.expect('[');
      const bool arr = p.peek('[');
      if (arr) p.expect('[');
      const std::string name = p.bare_key();
      p.expect(']');
      if (arr) p.expect(']');
      if (!p.at_end_or_comment()) p.fail("unexpected text after section header");
      if (!arr) {
        auto [it, fresh] = plain_headers.emplace(name, line_no);
        if (!fresh) p.fail("duplicate section [" + name + "] (first at line " + std::to_string(it->second) + ")");
      }
      doc.sections.push_back({name, arr, line_no, {}});
      seen.emplace_back();
    } else {
      const std::string key = p.bare_key();
      p.expect('=');
      auto v = p.value();
      if (!p.at_end_or_comment()) p.fail("unexpected text after value of " + quote_key(key));
      auto [it, fresh] = seen.back().emplace(key, line_no);
      if (!fresh) p.fail("duplicate key " + quote_key(key) + " (first at line " + std::to_string(it->second) + ")");
      doc.sections.back().entries.push_back({key, std::move(v), line_no});
    }
    if (end == text.size()) break;
  }
  return doc;
}

ConfigDocument read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

BoundSection::BoundSection(const ConfigDocument& doc, const ConfigSection& section,
                           const std::vector<FieldSpec>& schema)
    : source_(doc.source), section_(section.name), section_line_(section.line) {
  std::map<std::string, int> bound_at;
  for (const auto& e : section.entries) {
    const FieldSpec* match = nullptr;
    double factor = 1.0;
    for (const auto& f : schema) {
      const auto& us = units_for(f.dim);
      if (us.empty()) {
        if (e.key == f.base) match = &f;
      } else if (e.key == f.base) {
        throw ValidationError(where(e.line) + "key " + quote_key(e.key) + " needs a unit suffix (e.g. " + f.base +
                              "_" + us.front().suffix + ")");
      } else if (e.key.size() > f.base.size() + 1 && e.key.compare(0, f.base.size(), f.base) == 0 &&
                 e.key[f.base.size()] == '_') {
        const std::string suffix = e.key.substr(f.base.size() + 1);
        for (const auto& u : us) {
          if (suffix == u.suffix) match = &f, factor = u.factor;
        }
      }
      if (match) break;
    }
    if (!match) throw ValidationError(where(e.line) + "unknown key " + quote_key(e.key));
    auto [it, fresh] = bound_at.emplace(match->base, e.line);
    if (!fresh) {
      throw ValidationError(where(e.line) + "quantity '" + match->base + "' already given at line " +
                            std::to_string(it->second));
    }

    BoundValue bv{match, e.value, e.line};
    auto check_sign = [&](double v) {
      if ((match->sign == Sign::Positive && !(v > 0.0)) || (match->sign == Sign::NonNegative && !(v >= 0.0))) {
        throw ValidationError(where(e.line) + quote_key(e.key) + " must be " +
                              (match->sign == Sign::Positive ? "positive" : "non-negative"));
      }
    };
    auto type_error = [&] {
      throw ValidationError(where(e.line) + quote_key(e.key) + " must be a " + kind_name(match->dim));
    };
    switch (match->dim) {
      case Dim::Text:
        if (!std::holds_alternative<std::string>(e.value)) type_error();
        break;
      case Dim::Flag:
        if (!std::holds_alternative<bool>(e.value)) type_error();
        break;
      case Dim::TextList:
        if (auto* v = std::get_if<std::vector<double>>(&e.value); v && v->empty()) {
          bv.value = std::vector<std::string>{};
        } else if (!std::holds_alternative<std::vector<std::string>>(e.value)) {
          type_error();
        }
        break;
      case Dim::FrequencyList:
      case Dim::TimeList: {
        auto* v = std::get_if<std::vector<double>>(&e.value);
        if (!v) type_error();
        std::vector<double> out;
        for (double x : *v) {
          check_sign(x);
          out.push_back(x * factor);
        }
        bv.value = out;
        break;
      }
      case Dim::Count: {
        auto* v = std::get_if<double>(&e.value);
        if (!v || *v != std::floor(*v) || *v < 1.0 || *v > 1e9) type_error();
        break;
      }
      default: {
        auto* v = std::get_if<double>(&e.value);
        if (!v) type_error();
        check_sign(*v);
        bv.value = *v * factor;
      }
    }
    values_.push_back(std::move(bv));
  }
}

std::string BoundSection::where(int line) const {
  return source_ + ":" + std::to_string(line) + ": [" + section_ + "] ";
}

void BoundSection::fail(const std::string& base, const std::string& message) const {
  const auto* v = find(base);
  throw ValidationError(where(v ? v->line : section_line_) + message);
}

const BoundValue* BoundSection::find(const std::string& base) const {
  for (const auto& v : values_) {
    if (v.spec->base == base) return &v;
  }
  return nullptr;
}

bool BoundSection::has(const std::string& base) const { return find(base) != nullptr; }

std::optional<double> BoundSection::number(const std::string& base) const {
  const auto* v = find(base);
  if (!v) return std::nullopt;
  return std::get<double>(v->value);
}

std::optional<std::size_t> BoundSection::count(const std::string& base) const {
  const auto* v = find(base);
  if (!v) return std::nullopt;
  return static_cast<std::size_t>(std::get<double>(v->value));
}

std::optional<std::string> BoundSection::text(const std::string& base) const {
  const auto* v = find(base);
  if (!v) return std::nullopt;
  return std::get<std::string>(v->value);
}

std::optional<bool> BoundSection::flag(const std::string& base) const {
  const auto* v = find(base);
  if (!v) return std::nullopt;
  return std::get<bool>(v->value);
}

std::optional<std::vector<double>> BoundSection::numbers(const std::string& base) const {
  const auto* v = find(base);
  if (!v) return std::nullopt;
  return std::get<std::vector<double>>(v->value);
}

std::optional<std::vector<std::string>> BoundSection::texts(const std::string& base) const {
  const auto* v = find(base);
  if (!v) return std::nullopt;
  return std::get<std::vector<std::string>>(v->value);
}

double BoundSection::required_number(const std::string& base) const {
  if (auto v = number(base)) return *v;
  throw ValidationError(where(section_line_) + "missing required quantity '" + base + "'");
}

std::string BoundSection::required_text(const std::string& base) const {
  if (auto v = text(base)) return *v;
  throw ValidationError(where(section_line_) + "missing required key '" + base + "'");
}

const char* si_suffix(Dim dim) {
  const auto& us = units_for(dim);
  return us.empty() ? "" : us.front().suffix;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eE") == std::string::npos && s.find("inf") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace reicqed::cli
