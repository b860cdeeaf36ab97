#pragma once

#include "linalg.hpp"

#include <string>
#include <vector>

namespace l2boost {

struct csv_table {
  std::vector<std::string> header;
  matrix values;
};

// Reads a rectangular numeric CSV with a header row. Cell positions in
// parse errors are 1-based and count the header as row 1.
csv_table read_csv(const std::string& path);

// %.12g rendering used by every CSV writer, so identical doubles always
// produce identical bytes.
std::string format_g12(double v);

class csv_writer {
public:
  explicit csv_writer(const std::string& path);
  ~csv_writer();
  csv_writer(const csv_writer&) = delete;
  csv_writer& operator=(const csv_writer&) = delete;

  void row(const std::vector<std::string>& cells);

private:
  void* file_;
};

} // namespace l2boost
