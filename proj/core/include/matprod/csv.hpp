#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace matprod {

/// Shortest decimal that round-trips to the same double ('.' separator,
/// locale-independent). Used for every float written to CSV.
std::string format_double(double v);

/// Fixed-dialect CSV writer: '.' decimals, '\n' line ends, UTF-8, header row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);
  /// Convenience: formats doubles with format_double.
  void row_values(const std::vector<double>& values);
  void close();

 private:
  std::ofstream out_;
};

std::string read_file_bytes(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace matprod
