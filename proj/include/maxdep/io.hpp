#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "maxdep/core.hpp"

namespace maxdep {

// Line and column are 1-based; line 1 is the header.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class MissingValueError : public Error {
 public:
  MissingValueError(std::size_t line, std::size_t column)
      : Error("missing value at line " + std::to_string(line) + ", column " +
              std::to_string(column) + " (use --drop-incomplete to skip such rows)"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Header labels plus data cells; empty cells are std::nullopt.
struct CsvData {
  char delimiter = ',';
  std::vector<std::string> labels;
  std::vector<std::vector<std::optional<double>>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

inline std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

inline double parse_number(std::string_view cell, char delim, std::size_t line, std::size_t col) {
  std::string text(cell);
  if (delim == ';') {
    if (text.find(',') != std::string::npos && text.find('.') != std::string::npos)
      throw ParseError(line, col, "mixed decimal separators in '" + text + "'");
    for (char& c : text)
      if (c == ',') c = '.';
  }
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, col, "cannot parse '" + std::string(cell) + "' as a number");
  return value;
}

}  // namespace detail

/// Parses CSV text. The header decides the delimiter: ';' if present (cells may
/// then use ',' as the decimal mark), ',' otherwise (cells use '.').
inline CsvData parse_csv_text(std::string_view text) {
  CsvData data;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (detail::trim(line).empty()) continue;

    if (!have_header) {
      data.delimiter = line.find(';') != std::string_view::npos ? ';' : ',';
      for (auto cell : detail::split(line, data.delimiter)) {
        const auto label = detail::unquote(cell);
        if (label.empty())
          throw ParseError(line_no, data.labels.size() + 1, "empty location label");
        data.labels.emplace_back(label);
      }
      have_header = true;
      continue;
    }

    const auto cells = detail::split(line, data.delimiter);
    if (cells.size() != data.labels.size())
      throw ParseError(line_no, std::min(cells.size(), data.labels.size()) + 1,
                       "expected " + std::to_string(data.labels.size()) + " cells, found " +
                           std::to_string(cells.size()));
    std::vector<std::optional<double>> row;
    row.reserve(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (cells[j].empty())
        row.emplace_back(std::nullopt);
      else
        row.emplace_back(detail::parse_number(cells[j], data.delimiter, line_no, j + 1));
    }
    data.rows.push_back(std::move(row));
    data.line_numbers.push_back(line_no);
  }
  if (!have_header) throw ParseError(1, 1, "empty input");
  return data;
}

inline CsvData read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_text(buf.str());
}

struct TableLoad {
  BlockMaximaTable table;
  std::size_t dropped_rows = 0;
};

/// Selects columns (all when `locations` is empty) and builds a validated table.
/// Rows with a missing selected cell are an error unless `drop_incomplete`.
inline TableLoad to_table(const CsvData& data, const std::vector<std::string>& locations = {},
                          bool drop_incomplete = false) {
  std::vector<std::size_t> cols;
  std::vector<std::string> labels;
  detail::make_locations(data.labels);  // rejects duplicate header labels
  if (locations.empty()) {
    for (std::size_t j = 0; j < data.labels.size(); ++j) cols.push_back(j);
    labels = data.labels;
  } else {
    for (const auto& want : locations) {
      const auto it = std::find(data.labels.begin(), data.labels.end(), want);
      if (it == data.labels.end()) throw Error("unknown location '" + want + "'");
      cols.push_back(static_cast<std::size_t>(it - data.labels.begin()));
      labels.push_back(want);
    }
  }

  std::vector<double> values;
  std::size_t kept = 0, dropped = 0;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    bool complete = true;
    for (std::size_t c = 0; c < cols.size() && complete; ++c) {
      if (!data.rows[i][cols[c]]) {
        if (!drop_incomplete) throw MissingValueError(data.line_numbers[i], cols[c] + 1);
        complete = false;
      }
    }
    if (!complete) {
      ++dropped;
      continue;
    }
    for (auto c : cols) values.push_back(*data.rows[i][c]);
    ++kept;
  }
  return {BlockMaximaTable(std::move(labels), std::move(values), kept), dropped};
}

inline TableLoad parse_csv(const std::filesystem::path& path, bool drop_incomplete = false,
                           const std::vector<std::string>& locations = {}) {
  return to_table(read_csv_file(path), locations, drop_incomplete);
}

// ---------------------------------------------------------------------------
// Number formatting and report writers
// ---------------------------------------------------------------------------

/// 17 significant digits: parses back to the identical double.
inline std::string format_exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_fixed4(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

namespace detail {

inline std::string join_subset(const SubsetIndex& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "+" : "") + std::to_string(s[i] + 1);
  return out;
}

inline std::string join_labels(const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? "+" : "") + labels[i];
  return out;
}

}  // namespace detail

/// One JSON object per report. Subset members are printed 1-based.
inline void write_report_json(std::ostream& os, const DependenceReport& r) {
  os << "{\"subset\": [";
  for (std::size_t i = 0; i < r.subset.size(); ++i) os << (i ? ", " : "") << r.subset[i] + 1;
  os << "], \"labels\": [";
  for (std::size_t i = 0; i < r.labels.size(); ++i) os << (i ? ", " : "") << json_string(r.labels[i]);
  os << "], \"v_hat\": " << format_exact(r.v_hat);
  if (r.madogram) os << ", \"madogram\": " << format_exact(*r.madogram);
  if (r.extremal_coefficient)
    os << ", \"extremal_coefficient\": " << format_exact(*r.extremal_coefficient);
  if (r.ci)
    os << ", \"ci\": {\"lower\": " << format_exact(r.ci->lower)
       << ", \"upper\": " << format_exact(r.ci->upper) << ", \"level\": " << format_exact(r.ci->level)
       << ", \"replicates\": " << r.ci->replicates << "}";
  os << "}";
}

inline void write_reports_csv(std::ostream& os, const std::vector<DependenceReport>& reports) {
  os << "subset,labels,v_hat,madogram,extremal_coefficient,ci_lower,ci_upper,ci_level,ci_replicates\n";
  for (const auto& r : reports) {
    os << detail::join_subset(r.subset) << ',' << detail::join_labels(r.labels) << ','
       << format_fixed4(r.v_hat) << ',';
    if (r.madogram) os << format_fixed4(*r.madogram);
    os << ',';
    if (r.extremal_coefficient) os << format_fixed4(*r.extremal_coefficient);
    os << ',';
    if (r.ci)
      os << format_fixed4(r.ci->lower) << ',' << format_fixed4(r.ci->upper) << ','
         << format_fixed4(r.ci->level) << ',' << r.ci->replicates;
    else
      os << ",,";
    os << '\n';
  }
}

/// Writes an n x k table as comma-delimited CSV with round-trippable numbers.
inline void write_table_csv(std::ostream& os, const std::vector<std::string>& labels,
                            std::span<const double> values) {
  const std::size_t k = labels.size();
  for (std::size_t j = 0; j < k; ++j) os << (j ? "," : "") << labels[j];
  os << '\n';
  for (std::size_t i = 0; i * k < values.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) os << (j ? "," : "") << format_exact(values[i * k + j]);
    os << '\n';
  }
}

}  // namespace maxdep
