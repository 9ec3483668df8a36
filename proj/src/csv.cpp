#include "fhn/csv.hpp"

#include <cstdio>
#include <fstream>

#include "fhn/errors.hpp"

namespace fhn {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
  std::size_t n_cols = 0;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    throw FhnError(ErrorCode::ConfigError, "cannot open output file: " + path);
  }
  impl_->n_cols = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << header[i];
  }
  impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != impl_->n_cols)
    throw FhnError(ErrorCode::ConfigError, "csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) impl_->out << ',';
    if (std::holds_alternative<double>(cells[i])) {
      impl_->out << format_double(std::get<double>(cells[i]));
    } else if (std::holds_alternative<long>(cells[i])) {
      impl_->out << std::get<long>(cells[i]);
    } else {
      impl_->out << std::get<std::string>(cells[i]);
    }
  }
  impl_->out << '\n';
}

}  // namespace fhn
