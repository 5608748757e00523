#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace dcpower::harness {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::map<std::string, std::string> metadata;  // config_hash, seed, version, timestamp

  void add_row(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;
};

/// Shortest decimal that round-trips the double.
std::string format_number(double v);
std::string format_cell(const Cell& cell);

/// One header row, RFC 4180 quoting, CRLF-free ("\n") line ends.
void write_csv(const ResultTable& table, std::ostream& out);
/// gnuplot-friendly: '#'-prefixed header, whitespace separated, strings quoted.
void write_dat(const ResultTable& table, std::ostream& out);

/// Writes <dir>/<name>.<format> for each format plus <dir>/<name>.meta.json.
/// Returns the data files written.
std::vector<std::filesystem::path> save_table(const ResultTable& table,
                                              const std::filesystem::path& dir,
                                              const std::vector<std::string>& formats);

}  // namespace dcpower::harness
