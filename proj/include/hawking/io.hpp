#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hawking {

/// Column-oriented numeric table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) { rows.push_back(std::move(row)); }
};

/// 17 significant digits; nan/inf spelled as such.
std::string format_number(double x);

void write_csv(const Table& table, std::ostream& out);
/// Whitespace-separated with a '#' header line (gnuplot).
void write_plot_data(const Table& table, std::ostream& out);

/// Writes <stem>.csv, and <stem>.dat when plot_data is set. Returns the paths written.
std::vector<std::filesystem::path> save_table(const Table& table, const std::filesystem::path& stem, bool plot_data);

}  // namespace hawking
