#include "csvio.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace ewsim::cli {

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double_cell(const std::string& cell) {
  double v = 0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
    throw std::invalid_argument("CSV cell is not a number: '" + cell + "'");
  return v;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::logic_error("write_table_csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

void write_matrix_csv(const std::string& path, const std::string& corner,
                      const std::vector<double>& col_headers,
                      const std::vector<double>& row_headers,
                      const std::vector<std::vector<double>>& cells) {
  if (cells.size() != row_headers.size())
    throw std::logic_error("write_matrix_csv: row count differs from row headers");
  auto out = open_out(path);
  out << corner;
  for (double c : col_headers) out << "," << format_double(c);
  out << "\n";
  for (std::size_t r = 0; r < cells.size(); ++r) {
    if (cells[r].size() != col_headers.size())
      throw std::logic_error("write_matrix_csv: cell row width differs from column headers");
    out << format_double(row_headers[r]);
    for (double v : cells[r]) out << "," << format_double(v);
    out << "\n";
  }
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace ewsim::cli
