#pragma once

// File-format helpers: line-oriented parsing with positioned errors, a flat
// key = value config reader, and CSV output with stable formatting.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpcc/random.hpp"

namespace mpcc {

// Parse failure with enough position information to fix the input: the
// message always reads "<file>:<line>: <reason>".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& reason)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + reason),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

namespace ioutil {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Strips a trailing '#' comment, then trims. Whole-line comments become "".
inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return trim(hash == std::string::npos ? line : line.substr(0, hash));
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

inline std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(trim(current));
  return parts;
}

inline double parse_double(const std::string& text, const std::string& file, std::size_t line,
                           const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected a number for " + what + ", got '" + text + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& text, const std::string& file,
                               std::size_t line, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.find('-') != std::string::npos)
      throw std::invalid_argument("not a plain nonnegative integer");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ParseError(file, line,
                     "expected a nonnegative integer for " + what + ", got '" + text + "'");
  }
}

// "lo:hi" pairs used for parameter ranges.
inline Interval parse_interval(const std::string& text, const std::string& file,
                               std::size_t line, const std::string& what) {
  const auto parts = split_on(text, ':');
  if (parts.size() != 2)
    throw ParseError(file, line, "expected '<lo>:<hi>' for " + what + ", got '" + text + "'");
  const double lo = parse_double(parts[0], file, line, what + " lower bound");
  const double hi = parse_double(parts[1], file, line, what + " upper bound");
  if (lo > hi)
    throw ParseError(file, line, what + ": lower bound " + parts[0] + " exceeds upper bound " +
                                     parts[1]);
  return Interval(lo, hi);
}

}  // namespace ioutil

// Flat "key = value" configuration with '#' comments. Keys are consumed by
// the typed getters; finish() rejects anything left over, so misspelled
// keys fail loudly instead of silently using a default.
class Config {
 public:
  static Config from_stream(std::istream& in, const std::string& name) {
    Config cfg;
    cfg.name_ = name;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const std::string line = ioutil::strip_comment(raw);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ParseError(name, line_no, "expected 'key = value', got '" + line + "'");
      const std::string key = ioutil::trim(line.substr(0, eq));
      const std::string value = ioutil::trim(line.substr(eq + 1));
      if (key.empty()) throw ParseError(name, line_no, "missing key before '='");
      if (value.empty()) throw ParseError(name, line_no, "missing value for key '" + key + "'");
      if (entries_contains(cfg, key))
        throw ParseError(name, line_no, "duplicate key '" + key + "'");
      cfg.entries_[key] = Entry{value, line_no};
    }
    return cfg;
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return from_stream(in, path);
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& name() const { return name_; }

  std::string get_string(const std::string& key, const std::string& fallback) {
    const Entry* e = take(key);
    return e ? e->value : fallback;
  }

  double get_double(const std::string& key, double fallback) {
    const Entry* e = take(key);
    return e ? ioutil::parse_double(e->value, name_, e->line, "'" + key + "'") : fallback;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
    const Entry* e = take(key);
    return e ? ioutil::parse_u64(e->value, name_, e->line, "'" + key + "'") : fallback;
  }

  std::size_t get_size(const std::string& key, std::size_t fallback) {
    return static_cast<std::size_t>(get_u64(key, fallback));
  }

  std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) {
    const Entry* e = take(key);
    if (!e) return fallback;
    std::vector<double> values;
    for (const std::string& part : ioutil::split_on(e->value, ','))
      values.push_back(ioutil::parse_double(part, name_, e->line, "'" + key + "'"));
    return values;
  }

  std::vector<std::string> get_string_list(const std::string& key,
                                           std::vector<std::string> fallback) {
    const Entry* e = take(key);
    if (!e) return fallback;
    return ioutil::split_on(e->value, ',');
  }

  Interval get_interval(const std::string& key, const Interval& fallback) {
    const Entry* e = take(key);
    return e ? ioutil::parse_interval(e->value, name_, e->line, "'" + key + "'") : fallback;
  }

  // Call after all getters: leftover keys are treated as spelling mistakes.
  void finish() const {
    for (const auto& [key, entry] : entries_)
      if (!consumed_.count(key))
        throw ParseError(name_, entry.line, "unknown key '" + key + "'");
  }

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static bool entries_contains(const Config& cfg, const std::string& key) {
    return cfg.entries_.count(key) != 0;
  }

  const Entry* take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    consumed_.insert(key);
    return &it->second;
  }

  std::string name_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> consumed_;
};

// Shortest-round-trip-style numeric formatting for CSV cells: six
// significant digits, matching printf %g.
inline std::string format_g6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return std::string(buf);
}

// Writes a CSV file: one header row, comma separators, no trailing
// delimiter, '\n' line ends. A failed write removes the partial file so
// downstream consumers never see a truncated table.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  for (const auto& row : rows)
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv: row width " + std::to_string(row.size()) +
                                  " does not match header width " +
                                  std::to_string(header.size()));
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  out.flush();
  if (!out) {
    out.close();
    std::error_code ec;
    std::filesystem::remove(path, ec);
    throw std::runtime_error("write_csv: failed while writing '" + path + "'");
  }
}

}  // namespace mpcc
