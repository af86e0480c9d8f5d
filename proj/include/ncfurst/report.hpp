#pragma once

#include "json.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncf {

enum class Format { Json, Csv, Text };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "text") return Format::Text;
  throw std::invalid_argument("unknown format '" + s + "' (json, csv, text)");
}

/// One flat record plus an optional table. Key order is insertion order, so a
/// fixed command and seed always print the same bytes.
struct Report {
  nlohmann::ordered_json record = nlohmann::ordered_json::object();
  std::vector<std::string> csv_keys;         // record columns for csv; empty means all
  std::vector<std::string> columns;          // table header
  std::vector<std::vector<nlohmann::ordered_json>> rows;
  int exit_code = 0;

  template <class T>
  Report& set(const std::string& key, T&& value) {
    record[key] = std::forward<T>(value);
    return *this;
  }
  bool empty() const { return record.empty() && rows.empty(); }

  /// Marks a failed mathematical check; the first witness wins.
  void fail(const std::string& witness) {
    exit_code = 1;
    if (!record.contains("witness")) record["witness"] = witness;
  }
};

namespace detail {

// floats use the shortest round-trip form, as in the json output
inline std::string scalar_text(const nlohmann::ordered_json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

// csv cells carry no spaces; a comma forces quoting
inline std::string csv_cell(const nlohmann::ordered_json& v) {
  std::string s = scalar_text(v);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.find(',') != std::string::npos || s.find('"') != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

inline void csv_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}

} // namespace detail

/// json: the record, with the table under "rows" as arrays in column order.
/// csv: the table when present, else one header line and one value line.
/// text: "key: value" lines, then table rows separated by spaces.
inline std::string emit(const Report& r, Format f) {
  std::ostringstream os;
  switch (f) {
  case Format::Json: {
    nlohmann::ordered_json j = r.record;
    if (!r.columns.empty()) {
      j["columns"] = r.columns;
      j["rows"] = nlohmann::ordered_json::array();
      for (auto& row : r.rows) j["rows"].push_back(row);
    }
    os << j.dump(2) << '\n';
    break;
  }
  case Format::Csv: {
    if (!r.columns.empty()) {
      detail::csv_line(os, r.columns);
      for (auto& row : r.rows) {
        std::vector<std::string> cells;
        for (auto& v : row) cells.push_back(detail::csv_cell(v));
        detail::csv_line(os, cells);
      }
      break;
    }
    if (r.record.empty()) break;
    std::vector<std::string> keys = r.csv_keys;
    if (keys.empty())
      for (auto& [k, v] : r.record.items()) keys.push_back(k);
    std::vector<std::string> cells;
    for (auto& k : keys) cells.push_back(r.record.contains(k) ? detail::csv_cell(r.record.at(k)) : "");
    detail::csv_line(os, keys);
    detail::csv_line(os, cells);
    break;
  }
  case Format::Text:
    for (auto& [k, v] : r.record.items()) os << k << ": " << detail::scalar_text(v) << '\n';
    if (!r.columns.empty()) {
      os << "# " << std::accumulate(std::next(r.columns.begin()), r.columns.end(), r.columns.front(),
                                    [](std::string a, const std::string& b) { return a + " " + b; })
         << '\n';
      for (auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << detail::scalar_text(row[i]);
        os << '\n';
      }
    }
    break;
  }
  return os.str();
}

} // namespace ncf
