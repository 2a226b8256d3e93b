#pragma once

// Plain-text file helpers shared by the CSV/OBJ/JSON writers.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "resdp/errors.hpp"
#include "resdp/format.hpp"

namespace resdp {

namespace detail {

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  return out;
}

inline void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write to " + path + " failed");
}

}  // namespace detail

inline void write_text(const std::string& path, const std::string& text) {
  auto out = detail::open_for_write(path);
  out << text;
  detail::finish_write(out, path);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  CsvTable table;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (std::getline(in, line)) table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(std::stod(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace resdp
