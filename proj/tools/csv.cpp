#include "csv.hpp"

#include <cstdio>
#include <fstream>

#include "qheat/errors.hpp"

namespace qheat::cli {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::string config_comment, std::string header) {
  text_ = "# " + std::move(config_comment) + "\n" + std::move(header) + "\n";
}

void CsvTable::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_ += ',';
    text_ += fields[i];
  }
  text_ += '\n';
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << text_;
  if (!out) throw ConfigError("failed writing output file: " + path);
}

}  // namespace qheat::cli
