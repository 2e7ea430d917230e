#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cimlmg/errors.hpp"

namespace cimlmg::report {

namespace schema {
inline constexpr std::string_view kPhase = "h,e_g,de_dh,d2e_dh2,gap";
inline constexpr std::string_view kCimPhase = "omega,e_g,de_domega,d2e_domega2,gap";
inline constexpr std::string_view kMetrology = "t,qfi,mean_p,var_p,chi,inv_var";
inline constexpr std::string_view kSde = "t,mean_ns,stderr_ns,model";
inline constexpr std::string_view kPeaks = "g,n,tau,qfi,inv_var,ratio,chi_abs";
inline constexpr std::string_view kWorkingPoint = "g,mean_p";
inline constexpr std::string_view kSdeComparison =
    "pump_ratio,model,steady_mean_ns,steady_stderr_ns,n_inf,steady_rel_diff,max_rel_diff";
inline constexpr std::string_view kConvergence = "n_spins,h,e0_per_spin,e_g,abs_error";
}  // namespace schema

/// 17 significant digits in the shortest of fixed/scientific form; enough to
/// round-trip every double, and locale independent.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw IoError("format_double: conversion failed");
  return std::string(buf.data(), p);
}

/// Shortest round-trip form, used for file names and labels.
inline std::string format_short(double v) {
  std::array<char, 64> buf{};
  const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw IoError("format_short: conversion failed");
  return std::string(buf.data(), p);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::string_view header) : columns_(count_columns(header)) {
    out_ << header << '\n';
  }

  /// Cells are doubles (formatted with format_double) or preformatted text.
  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row& operator<<(double v) { return cell(format_double(v)); }
    Row& operator<<(int v) { return cell(std::to_string(v)); }
    Row& operator<<(std::string_view s) { return cell(std::string(s)); }
    ~Row() noexcept(false) {
      if (cells_ != w_.columns_) {
        throw SchemaError("csv: row has " + std::to_string(cells_) + " cells, header has " +
                          std::to_string(w_.columns_));
      }
      w_.out_ << '\n';
    }

   private:
    Row& cell(const std::string& s) {
      if (cells_ > 0) w_.out_ << ',';
      w_.out_ << s;
      ++cells_;
      return *this;
    }
    CsvWriter& w_;
    std::size_t cells_ = 0;
  };

  Row row() { return Row(*this); }

  std::string str() const { return out_.str(); }

 private:
  static std::size_t count_columns(std::string_view header) {
    if (header.empty()) throw SchemaError("csv: empty header");
    std::size_t n = 1;
    for (char c : header) n += c == ',';
    return n;
  }

  std::size_t columns_;
  std::ostringstream out_;
};

/// Parsed CSV with a header row; cells are kept as text.
class CsvTable {
 public:
  static CsvTable parse(std::string_view text) {
    CsvTable t;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      pos = nl + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      auto cells = split(line);
      if (first) {
        t.header_ = std::move(cells);
        first = false;
        continue;
      }
      if (cells.size() != t.header_.size()) {
        throw SchemaError("csv: row " + std::to_string(t.rows_.size() + 1) + " has " +
                          std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(t.header_.size()));
      }
      t.rows_.push_back(std::move(cells));
    }
    if (first) throw SchemaError("csv: empty input (no header)");
    return t;
  }

  static CsvTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (header_[i] == name) return i;
    }
    throw SchemaError("csv: no column '" + std::string(name) + "'");
  }

  std::vector<double> numeric(std::string_view name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::string& s = rows_[r][c];
      double v = 0.0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || p != s.data() + s.size()) {
        throw SchemaError("csv: column '" + std::string(name) + "' row " + std::to_string(r + 1) +
                          " is not numeric: '" + s + "'");
      }
      out.push_back(v);
    }
    return out;
  }

  std::vector<std::string> text(std::string_view name) const {
    const std::size_t c = column_index(name);
    std::vector<std::string> out;
    for (const auto& r : rows_) out.push_back(r[c]);
    return out;
  }

 private:
  static std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cimlmg::report
