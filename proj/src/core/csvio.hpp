#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace twpk {

// RFC-4180 CSV writer: CRLF records, '.' decimal point, UTF-8. All payloads
// here are numeric or plain tokens, so no quoting is ever required.
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << "\r\n";
  }

private:
  std::ofstream out_;
};

std::string format_double(double v);

} // namespace twpk
