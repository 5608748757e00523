#include "dcpower/harness/result_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace dcpower::harness {

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row width does not match table '" + name + "'");
  }
  rows.push_back(std::move(row));
}

std::size_t ResultTable::column(const std::string& col) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == col) return i;
  }
  throw std::out_of_range("no column '" + col + "' in table '" + name + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string dat_field(const Cell& cell) {
  auto s = format_cell(cell);
  if (std::holds_alternative<std::string>(cell)) return "\"" + s + "\"";
  return s;
}

}  // namespace

void write_csv(const ResultTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_field(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << csv_field(format_cell(row[i]));
    }
    out << '\n';
  }
}

void write_dat(const ResultTable& table, std::ostream& out) {
  out << "#";
  for (const auto& c : table.columns) out << ' ' << c;
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << dat_field(row[i]);
    out << '\n';
  }
}

std::vector<std::filesystem::path> save_table(const ResultTable& table,
                                              const std::filesystem::path& dir,
                                              const std::vector<std::string>& formats) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& fmt : formats) {
    const auto path = dir / (table.name + "." + fmt);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (fmt == "csv") {
      write_csv(table, out);
    } else if (fmt == "dat") {
      write_dat(table, out);
    } else {
      throw std::invalid_argument("unknown output format '" + fmt + "'");
    }
    written.push_back(path);
  }
  nlohmann::json meta(table.metadata);
  meta["table"] = table.name;
  meta["columns"] = table.columns;
  meta["rows"] = table.rows.size();
  std::ofstream(dir / (table.name + ".meta.json")) << meta.dump(2) << '\n';
  return written;
}

}  // namespace dcpower::harness
