#include "volsample/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "volsample/error.hpp"

namespace volsample {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

Dataset finish(std::vector<double> values, Vector y, Index d,
               DatasetFormat format, std::string source, std::size_t lines) {
  if (y.empty()) {
    parse_error(lines, "no data rows");
  }
  Dataset ds;
  ds.row_count = y.size();
  ds.feature_count = d;
  ds.problem.x = Matrix(y.size(), d, std::move(values));
  ds.problem.y = std::move(y);
  ds.format = format;
  ds.source = std::move(source);
  return ds;
}

Dataset parse_csv(std::istream& in, std::string source) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  bool first = true;
  std::vector<double> values;
  Vector y;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size() && numeric; ++k)
      numeric = parse_double(fields[k], row[k]);
    if (first) {
      first = false;
      width = fields.size();
      if (width < 2) parse_error(lineno, "need at least one feature and a response");
      if (!numeric) continue;  // header
    } else if (fields.size() != width) {
      throw Error(ErrorCode::DimensionMismatch,
                  "line " + std::to_string(lineno) + ": expected " +
                      std::to_string(width) + " fields, found " +
                      std::to_string(fields.size()));
    }
    if (!numeric) parse_error(lineno, "non-numeric field");
    values.insert(values.end(), row.begin(), row.end() - 1);
    y.push_back(row.back());
  }
  return finish(std::move(values), std::move(y), width - 1, DatasetFormat::CSV,
                std::move(source), lineno);
}

Dataset parse_libsvm(std::istream& in, std::optional<Index> fixed_d,
                     std::string source) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::vector<std::pair<Index, double>>> rows;
  Vector y;
  Index max_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = trim(line);
    if (const auto hash = text.find('#'); hash != std::string_view::npos)
      text = trim(text.substr(0, hash));
    if (text.empty()) continue;
    const auto tokens = split_ws(text);
    double label = 0.0;
    if (!parse_double(tokens[0], label)) parse_error(lineno, "bad label");
    std::vector<std::pair<Index, double>> entries;
    Index prev = 0;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const auto colon = tokens[k].find(':');
      if (colon == std::string_view::npos) parse_error(lineno, "expected index:value");
      const auto idx_text = tokens[k].substr(0, colon);
      Index idx = 0;
      const auto [ptr, ec] = std::from_chars(
          idx_text.data(), idx_text.data() + idx_text.size(), idx);
      if (ec != std::errc() || ptr != idx_text.data() + idx_text.size() || idx == 0)
        parse_error(lineno, "bad feature index");
      if (idx <= prev) parse_error(lineno, "feature indices must increase");
      prev = idx;
      double v = 0.0;
      if (!parse_double(tokens[k].substr(colon + 1), v))
        parse_error(lineno, "bad feature value");
      if (fixed_d && idx > *fixed_d) {
        throw Error(ErrorCode::DimensionMismatch,
                    "line " + std::to_string(lineno) + ": feature index " +
                        std::to_string(idx) + " exceeds d = " +
                        std::to_string(*fixed_d));
      }
      max_index = std::max(max_index, idx);
      entries.emplace_back(idx - 1, v);
    }
    rows.push_back(std::move(entries));
    y.push_back(label);
  }
  const Index d = fixed_d.value_or(max_index);
  if (d == 0 && !y.empty()) parse_error(lineno, "no features");
  std::vector<double> values(rows.size() * d, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, v] : rows[i]) values[i * d + j] = v;
  return finish(std::move(values), std::move(y), d, DatasetFormat::LibSVM,
                std::move(source), lineno);
}

void write_number(std::ostream& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, ptr - buf);
}

}  // namespace

std::string_view to_string(DatasetFormat f) {
  return f == DatasetFormat::CSV ? "csv" : "libsvm";
}

DatasetFormat parse_format(std::string_view name) {
  if (name == "csv") return DatasetFormat::CSV;
  if (name == "libsvm") return DatasetFormat::LibSVM;
  throw Error(ErrorCode::InvalidConfig,
              "unknown format '" + std::string(name) + "'");
}

Dataset parse_dataset(std::istream& in, DatasetFormat format,
                      std::optional<Index> feature_count, std::string source) {
  if (format == DatasetFormat::CSV) return parse_csv(in, std::move(source));
  return parse_libsvm(in, feature_count, std::move(source));
}

Dataset parse_dataset(const std::string& path, DatasetFormat format,
                      std::optional<Index> feature_count) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return parse_dataset(in, format, feature_count, path);
}

void write_csv(std::ostream& out, const RegressionProblem& p) {
  for (Index j = 0; j < p.dim(); ++j) out << 'x' << j + 1 << ',';
  out << "y\n";
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index j = 0; j < p.dim(); ++j) {
      write_number(out, p.x(i, j));
      out << ',';
    }
    write_number(out, p.y[i]);
    out << '\n';
  }
}

void write_libsvm(std::ostream& out, const RegressionProblem& p) {
  for (Index i = 0; i < p.rows(); ++i) {
    write_number(out, p.y[i]);
    for (Index j = 0; j < p.dim(); ++j) {
      if (p.x(i, j) == 0.0) continue;
      out << ' ' << j + 1 << ':';
      write_number(out, p.x(i, j));
    }
    out << '\n';
  }
}

}  // namespace volsample
