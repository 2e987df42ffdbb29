#include "hawking/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace hawking {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void write_rows(const Table& table, std::ostream& out, const char* sep) {
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? sep : "") << format_number(row[k]);
    out << '\n';
  }
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? "," : "") << table.columns[k];
  out << '\n';
  write_rows(table, out, ",");
}

void write_plot_data(const Table& table, std::ostream& out) {
  out << '#';
  for (const auto& c : table.columns) out << ' ' << c;
  out << '\n';
  write_rows(table, out, " ");
}

std::vector<std::filesystem::path> save_table(const Table& table, const std::filesystem::path& stem, bool plot_data) {
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    written.push_back(p);
    return f;
  };
  {
    auto f = open(std::filesystem::path(stem.string() + ".csv"));
    write_csv(table, f);
  }
  if (plot_data) {
    auto f = open(std::filesystem::path(stem.string() + ".dat"));
    write_plot_data(table, f);
  }
  return written;
}

}  // namespace hawking
