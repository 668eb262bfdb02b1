// csv.hpp — Deterministic CSV assembly (17-significant-digit floats)

#pragma once

#include <string>
#include <vector>

namespace qheat::cli {

std::string format_g17(double x);

// Accumulates the whole table and writes it in one shot; a '#' comment line
// with the resolved configuration always comes first.
class CsvTable {
 public:
  CsvTable(std::string config_comment, std::string header);
  void row(const std::vector<std::string>& fields);
  const std::string& text() const { return text_; }
  void write(const std::string& path) const;

 private:
  std::string text_;
};

}  // namespace qheat::cli
