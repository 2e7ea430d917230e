#pragma once

// Line-oriented sectioned config:
//
//   # comment            (also ';' at line start)
//   [section]
//   key = value
//
// Keys are unique within a section and sections are unique. Values run to the
// end of the line with surrounding blanks stripped; there are no inline
// comments or quoting. Lists are comma separated.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cimlmg/errors.hpp"

namespace cimlmg::report {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A value is well-formed but not acceptable; field() is "section.key".
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& msg)
      : Error("invalid " + field + ": " + msg), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

namespace detail {
inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;  // of the value
};

class IniSection {
 public:
  explicit IniSection(std::string name = {}, int line = 0) : name_(std::move(name)), line_(line) {}

  const std::string& name() const { return name_; }
  int line() const { return line_; }
  const std::vector<IniEntry>& entries() const { return entries_; }

  void add(IniEntry e) { entries_.push_back(std::move(e)); }

  const IniEntry* find(std::string_view key) const {
    for (const auto& e : entries_) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  bool has(std::string_view key) const { return find(key) != nullptr; }

  std::string field(std::string_view key) const { return name_ + "." + std::string(key); }

  std::optional<std::string> get_string(std::string_view key) const {
    used_.insert(std::string(key));
    if (const auto* e = find(key)) return e->value;
    return std::nullopt;
  }

  std::string get_string(std::string_view key, std::string fallback) const {
    return get_string(key).value_or(std::move(fallback));
  }

  std::optional<double> get_double(std::string_view key) const {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    return parse_double(key, *s);
  }

  double get_double(std::string_view key, double fallback) const {
    return get_double(key).value_or(fallback);
  }

  std::optional<std::int64_t> get_int(std::string_view key) const {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc{} || p != s->data() + s->size()) {
      throw ValidationError(field(key), "expected an integer, got '" + *s + "'");
    }
    return v;
  }

  std::int64_t get_int(std::string_view key, std::int64_t fallback) const {
    return get_int(key).value_or(fallback);
  }

  std::optional<std::uint64_t> get_u64(std::string_view key) const {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc{} || p != s->data() + s->size()) {
      throw ValidationError(field(key), "expected an unsigned 64-bit integer, got '" + *s + "'");
    }
    return v;
  }

  bool get_bool(std::string_view key, bool fallback) const {
    const auto s = get_string(key);
    if (!s) return fallback;
    if (*s == "true" || *s == "yes" || *s == "on" || *s == "1") return true;
    if (*s == "false" || *s == "no" || *s == "off" || *s == "0") return false;
    throw ValidationError(field(key), "expected true/false, got '" + *s + "'");
  }

  std::vector<std::string> get_list(std::string_view key) const {
    std::vector<std::string> out;
    const auto s = get_string(key);
    if (!s) return out;
    std::string_view rest = *s;
    while (true) {
      const auto comma = rest.find(',');
      const auto item = detail::trim(rest.substr(0, comma));
      if (item.empty()) throw ValidationError(field(key), "empty list item in '" + *s + "'");
      out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  std::vector<double> get_double_list(std::string_view key) const {
    std::vector<double> out;
    for (const auto& item : get_list(key)) out.push_back(parse_double(key, item));
    return out;
  }

  /// Keys never requested through a getter.
  std::vector<const IniEntry*> unused() const {
    std::vector<const IniEntry*> out;
    for (const auto& e : entries_) {
      if (!used_.count(e.key)) out.push_back(&e);
    }
    return out;
  }

 private:
  double parse_double(std::string_view key, const std::string& s) const {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw ValidationError(field(key), "expected a number, got '" + s + "'");
    }
    return v;
  }

  std::string name_;
  int line_ = 0;
  std::vector<IniEntry> entries_;
  mutable std::set<std::string> used_;
};

class IniDocument {
 public:
  static IniDocument parse(std::string_view text) {
    IniDocument doc;
    IniSection* current = nullptr;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view raw = text.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      const auto first = raw.find_first_not_of(" \t");
      if (first == std::string_view::npos || raw[first] == '#' || raw[first] == ';') {
        if (nl == text.size()) break;
        continue;
      }
      const int col0 = static_cast<int>(first) + 1;
      if (raw[first] == '[') {
        const auto close = raw.find(']', first);
        if (close == std::string_view::npos) {
          throw ConfigError("missing ']' in section header", line_no, static_cast<int>(raw.size()) + 1);
        }
        if (!detail::trim(raw.substr(close + 1)).empty()) {
          throw ConfigError("unexpected text after section header", line_no, static_cast<int>(close) + 2);
        }
        const auto name = detail::trim(raw.substr(first + 1, close - first - 1));
        if (name.empty()) throw ConfigError("empty section name", line_no, col0);
        for (char c : name) {
          if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) {
            throw ConfigError("invalid character in section name", line_no, col0 + 1);
          }
        }
        if (doc.find(name)) {
          throw ConfigError("duplicate section [" + std::string(name) + "]", line_no, col0);
        }
        doc.sections_.emplace_back(std::string(name), line_no);
        current = &doc.sections_.back();
      } else {
        const auto eq = raw.find('=', first);
        if (eq == std::string_view::npos) {
          throw ConfigError("expected 'key = value'", line_no, col0);
        }
        const auto key = detail::trim(raw.substr(first, eq - first));
        if (key.empty()) throw ConfigError("empty key", line_no, col0);
        for (std::size_t i = 0; i < key.size(); ++i) {
          const char c = key[i];
          if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
            throw ConfigError("invalid character in key", line_no, col0 + static_cast<int>(i));
          }
        }
        if (!current) throw ConfigError("key outside of any section", line_no, col0);
        if (current->has(key)) {
          throw ConfigError("duplicate key '" + std::string(key) + "' in [" + current->name() + "]",
                            line_no, col0);
        }
        const auto after = raw.substr(eq + 1);
        const auto vstart = after.find_first_not_of(" \t");
        const int vcol = static_cast<int>(eq) + 2 + static_cast<int>(vstart == std::string_view::npos ? 0 : vstart);
        const auto value = detail::trim(after);
        if (value.empty()) throw ConfigError("missing value for '" + std::string(key) + "'", line_no, vcol);
        current->add({std::string(key), std::string(value), line_no, vcol});
      }
      if (nl == text.size()) break;
    }
    return doc;
  }

  static IniDocument load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  const IniSection* find(std::string_view name) const {
    for (const auto& s : sections_) {
      if (s.name() == name) return &s;
    }
    return nullptr;
  }

  /// The named section, or an empty one when absent.
  const IniSection& section(std::string_view name) const {
    if (const auto* s = find(name)) return *s;
    empties_.emplace_back(std::string(name));
    return empties_.back();
  }

  const std::deque<IniSection>& sections() const { return sections_; }

 private:
  std::deque<IniSection> sections_;
  mutable std::deque<IniSection> empties_;
};

}  // namespace cimlmg::report
