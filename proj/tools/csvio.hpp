#pragma once

#include <string>
#include <vector>

namespace ewsim::cli {

// Shortest round-trip decimal form of a double (std::to_chars); parsing it
// back recovers the identical bits.
std::string format_double(double v);
double parse_double_cell(const std::string& cell);

// Plain table: one header row of column names, then numeric rows.
void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

// Matrix with numeric row/column headers: first row is corner label followed
// by column headers, each later row starts with its row header.
void write_matrix_csv(const std::string& path, const std::string& corner,
                      const std::vector<double>& col_headers,
                      const std::vector<double>& row_headers,
                      const std::vector<std::vector<double>>& cells);

// Split a CSV file into trimmed string cells; no quoting or escapes (none of
// the writers emit them).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace ewsim::cli
