#pragma once

#include <string>
#include <variant>
#include <vector>

namespace fhn {

/// CSV writer with a mandatory header row; doubles are written with 17
/// significant digits so outputs are bit-reproducible.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  using Cell = std::variant<double, long, std::string>;
  void row(const std::vector<Cell>& cells);

 private:
  struct Impl;
  Impl* impl_;
};

std::string format_double(double v);

}  // namespace fhn
