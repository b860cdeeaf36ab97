#include "csv.hpp"

#include "errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace l2boost {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string t = trim(raw);
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "cannot parse '%s' as a number at row %zu, column %zu", t.c_str(), row, col);
    fail(errc::parse_error, buf);
  }
  return v;
}

} // namespace

csv_table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) fail(errc::parse_error, "empty file: " + path);
  csv_table table;
  for (auto& h : split_line(line)) table.header.push_back(trim(h));
  const std::size_t p = table.header.size();
  if (p == 0) fail(errc::parse_error, "header row has no fields: " + path);

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != p) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "row %zu has %zu fields, expected %zu", lineno, cells.size(), p);
      fail(errc::parse_error, buf);
    }
    std::vector<double> vals(p);
    for (std::size_t j = 0; j < p; ++j) vals[j] = parse_cell(cells[j], lineno, j + 1);
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) fail(errc::parse_error, "no data rows: " + path);

  table.values = matrix(rows.size(), p);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < p; ++j) table.values(i, j) = rows[i][j];
  return table;
}

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

csv_writer::csv_writer(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) fail(errc::io_error, "cannot write " + path);
  file_ = f;
}

csv_writer::~csv_writer() {
  if (file_) std::fclose(static_cast<FILE*>(file_));
}

void csv_writer::row(const std::vector<std::string>& cells) {
  FILE* f = static_cast<FILE*>(file_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) std::fputc(',', f);
    std::fputs(cells[i].c_str(), f);
  }
  std::fputc('\n', f);
}

} // namespace l2boost
